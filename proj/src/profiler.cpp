#include "unionbench/profiler.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "unionbench/benchmark.hpp"
#include "unionbench/errors.hpp"

namespace unionbench {

namespace fs = std::filesystem;

std::string_view uniqueness_bucket_name(UniquenessBucket b) {
    switch (b) {
        case UniquenessBucket::Sparsely: return "sparsely";
        case UniquenessBucket::Moderately: return "moderately";
        case UniquenessBucket::Densely: return "densely";
    }
    return "?";
}

namespace {

bool is_null_literal(const std::string& v) {
    std::string t = to_lower(trim(v));
    return t == "null" || t == "na" || t == "n/a" || t == "none" || t == "nan" || t == "-";
}

}  // namespace

ColumnStats profile_column(std::span<const std::string> values, bool null_literals) {
    std::vector<std::string> normalized;
    std::span<const std::string> v = values;
    if (null_literals) {
        normalized.assign(values.begin(), values.end());
        for (auto& cell : normalized)
            if (!cell.empty() && is_null_literal(cell))
                cell.clear();
        v = normalized;
    }

    ColumnStats s;
    size_t non_null = 0, words = 0;
    std::set<std::string> distinct;
    for (const auto& cell : v)
        if (!cell.empty()) {
            ++non_null;
            words += word_count(cell);
            distinct.insert(cell);
        }
    s.density = v.empty() ? 1.0
                          : static_cast<double>(non_null) / static_cast<double>(v.size());
    s.uniqueness = non_null == 0 ? 0.0
                                 : static_cast<double>(distinct.size()) /
                                       static_cast<double>(non_null);
    s.mean_words = non_null == 0 ? 0.0
                                 : static_cast<double>(words) / static_cast<double>(non_null);
    s.type = infer_column_type(v);
    s.bucket = s.uniqueness < 0.10   ? UniquenessBucket::Sparsely
               : s.uniqueness < 0.50 ? UniquenessBucket::Moderately
                                     : UniquenessBucket::Densely;
    return s;
}

namespace {

SideStats profile_side(const std::vector<Table>& tables, const fs::path& dir,
                       bool null_literals) {
    SideStats s;
    s.tables = tables.size();
    double density_sum = 0.0, words_sum = 0.0;
    for (const auto& t : tables) {
        s.avg_rows += static_cast<double>(t.n_rows());
        s.avg_cols += static_cast<double>(t.n_cols());
        std::error_code ec;
        uintmax_t sz = fs::file_size(dir / t.name, ec);
        if (!ec)
            s.bytes += sz;
        for (size_t c = 0; c < t.n_cols(); ++c) {
            ColumnStats cs = profile_column(t.column(c), null_literals);
            ++s.columns;
            density_sum += cs.density;
            words_sum += cs.mean_words;
            switch (cs.type) {
                case ColumnType::Numeric: ++s.numeric; break;
                case ColumnType::ShortString: ++s.short_str; break;
                case ColumnType::MediumString: ++s.medium_str; break;
                case ColumnType::LongString: ++s.long_str; break;
            }
            switch (cs.bucket) {
                case UniquenessBucket::Sparsely: ++s.sparsely; break;
                case UniquenessBucket::Moderately: ++s.moderately; break;
                case UniquenessBucket::Densely: ++s.densely; break;
            }
        }
    }
    if (s.tables) {
        s.avg_rows /= static_cast<double>(s.tables);
        s.avg_cols /= static_cast<double>(s.tables);
    }
    if (s.columns) {
        s.avg_density = density_sum / static_cast<double>(s.columns);
        s.avg_words = words_sum / static_cast<double>(s.columns);
    }
    return s;
}

nlohmann::json side_json(const SideStats& s) {
    return {
        {"tables", s.tables},
        {"avg_rows", s.avg_rows},
        {"avg_cols", s.avg_cols},
        {"bytes", s.bytes},
        {"columns", s.columns},
        {"column_types",
         {{"short_string", s.short_str},
          {"medium_string", s.medium_str},
          {"long_string", s.long_str},
          {"numeric", s.numeric}}},
        {"uniqueness",
         {{"sparsely", s.sparsely}, {"moderately", s.moderately}, {"densely", s.densely}}},
        {"avg_density", s.avg_density},
        {"avg_words", s.avg_words},
    };
}

nlohmann::json profile_json_object(const BenchmarkProfile& p) {
    return {
        {"source", p.source},
        {"n_tables", p.n_tables},
        {"pairs", {{"unionable", p.unionable_pairs}, {"non_unionable", p.non_unionable_pairs}}},
        {"query", side_json(p.query)},
        {"datalake", side_json(p.datalake)},
    };
}

// Flat numeric view used for deltas between profiles.
std::vector<std::pair<std::string, double>> numeric_fields(const BenchmarkProfile& p) {
    std::vector<std::pair<std::string, double>> out;
    out.emplace_back("n_tables", static_cast<double>(p.n_tables));
    out.emplace_back("pairs.unionable", static_cast<double>(p.unionable_pairs));
    out.emplace_back("pairs.non_unionable", static_cast<double>(p.non_unionable_pairs));
    const SideStats* sides[2] = {&p.query, &p.datalake};
    const char* names[2] = {"query", "datalake"};
    for (int i = 0; i < 2; ++i) {
        const SideStats& s = *sides[i];
        std::string prefix = std::string(names[i]) + ".";
        out.emplace_back(prefix + "tables", static_cast<double>(s.tables));
        out.emplace_back(prefix + "avg_rows", s.avg_rows);
        out.emplace_back(prefix + "avg_cols", s.avg_cols);
        out.emplace_back(prefix + "bytes", static_cast<double>(s.bytes));
        out.emplace_back(prefix + "columns", static_cast<double>(s.columns));
        out.emplace_back(prefix + "short_string", static_cast<double>(s.short_str));
        out.emplace_back(prefix + "medium_string", static_cast<double>(s.medium_str));
        out.emplace_back(prefix + "long_string", static_cast<double>(s.long_str));
        out.emplace_back(prefix + "numeric", static_cast<double>(s.numeric));
        out.emplace_back(prefix + "sparsely", static_cast<double>(s.sparsely));
        out.emplace_back(prefix + "moderately", static_cast<double>(s.moderately));
        out.emplace_back(prefix + "densely", static_cast<double>(s.densely));
        out.emplace_back(prefix + "avg_density", s.avg_density);
        out.emplace_back(prefix + "avg_words", s.avg_words);
    }
    return out;
}

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

}  // namespace

BenchmarkProfile profile_benchmark(const fs::path& dir, bool null_literals) {
    Benchmark b = load_benchmark(dir);
    BenchmarkProfile p;
    p.source = dir.string();
    p.query = profile_side(b.queries, dir / "query", null_literals);
    p.datalake = profile_side(b.datalake, dir / "datalake", null_literals);
    p.n_tables = b.queries.size() + b.datalake.size();
    for (const auto& pair : b.groundtruth) {
        if (pair.is_unionable())
            ++p.unionable_pairs;
        else
            ++p.non_unionable_pairs;
    }
    return p;
}

std::string profile_to_json(const BenchmarkProfile& p) {
    return profile_json_object(p).dump(2) + "\n";
}

std::string profile_to_text(const BenchmarkProfile& p) {
    std::ostringstream os;
    os << "benchmark: " << p.source << "\n";
    os << "tables: " << p.n_tables << " (" << p.query.tables << " query, " << p.datalake.tables
       << " datalake)\n";
    os << "labeled pairs: " << p.unionable_pairs << " unionable / " << p.non_unionable_pairs
       << " non-unionable\n";
    auto row = [&](const char* label, const std::string& q, const std::string& d) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "  %-26s %16s %16s\n", label, q.c_str(), d.c_str());
        os << buf;
    };
    row("", "query", "datalake");
    row("avg shape (rows x cols)",
        fmt("%.2f", p.query.avg_rows) + " x " + fmt("%.2f", p.query.avg_cols),
        fmt("%.2f", p.datalake.avg_rows) + " x " + fmt("%.2f", p.datalake.avg_cols));
    row("size (bytes)", std::to_string(p.query.bytes), std::to_string(p.datalake.bytes));
    row("columns", std::to_string(p.query.columns), std::to_string(p.datalake.columns));
    row("  short string", std::to_string(p.query.short_str),
        std::to_string(p.datalake.short_str));
    row("  medium string", std::to_string(p.query.medium_str),
        std::to_string(p.datalake.medium_str));
    row("  long string", std::to_string(p.query.long_str),
        std::to_string(p.datalake.long_str));
    row("  numeric", std::to_string(p.query.numeric), std::to_string(p.datalake.numeric));
    row("  sparsely unique", std::to_string(p.query.sparsely),
        std::to_string(p.datalake.sparsely));
    row("  moderately unique", std::to_string(p.query.moderately),
        std::to_string(p.datalake.moderately));
    row("  densely unique", std::to_string(p.query.densely),
        std::to_string(p.datalake.densely));
    row("avg density", fmt("%.2f%%", p.query.avg_density * 100.0),
        fmt("%.2f%%", p.datalake.avg_density * 100.0));
    row("avg words per value", fmt("%.2f", p.query.avg_words),
        fmt("%.2f", p.datalake.avg_words));
    return os.str();
}

std::string compare_to_json(const std::vector<BenchmarkProfile>& profiles) {
    if (profiles.size() < 2)
        throw std::invalid_argument("profile comparison needs at least two profiles");
    nlohmann::json out;
    out["profiles"] = nlohmann::json::array();
    for (const auto& p : profiles)
        out["profiles"].push_back(profile_json_object(p));
    auto base = numeric_fields(profiles[0]);
    out["deltas"] = nlohmann::json::array();
    for (const auto& p : profiles) {
        auto fields = numeric_fields(p);
        nlohmann::json delta;
        for (size_t i = 0; i < fields.size(); ++i)
            delta[fields[i].first] = fields[i].second - base[i].second;
        out["deltas"].push_back(delta);
    }
    return out.dump(2) + "\n";
}

std::string compare_to_text(const std::vector<BenchmarkProfile>& profiles) {
    if (profiles.size() < 2)
        throw std::invalid_argument("profile comparison needs at least two profiles");
    std::ostringstream os;
    for (size_t i = 0; i < profiles.size(); ++i)
        os << "[" << i << "] " << profiles[i].source << "\n";
    os << "\n";
    auto base = numeric_fields(profiles[0]);
    std::vector<std::vector<std::pair<std::string, double>>> all;
    for (const auto& p : profiles)
        all.push_back(numeric_fields(p));
    char buf[200];
    std::snprintf(buf, sizeof buf, "%-26s", "field");
    os << buf;
    for (size_t i = 0; i < profiles.size(); ++i) {
        std::snprintf(buf, sizeof buf, " %14s[%zu]", i == 0 ? "value" : "value/delta", i);
        os << buf;
    }
    os << "\n";
    for (size_t f = 0; f < base.size(); ++f) {
        std::snprintf(buf, sizeof buf, "%-26s", base[f].first.c_str());
        os << buf;
        for (size_t i = 0; i < all.size(); ++i) {
            if (i == 0)
                std::snprintf(buf, sizeof buf, " %18s", fmt("%.2f", all[i][f].second).c_str());
            else
                std::snprintf(buf, sizeof buf, " %18s",
                              (fmt("%.2f", all[i][f].second) + " (" +
                               fmt("%+.2f", all[i][f].second - base[f].second) + ")")
                                  .c_str());
            os << buf;
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace unionbench
