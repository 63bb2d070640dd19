#include "unionbench/generation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

#include "unionbench/benchmark.hpp"
#include "unionbench/errors.hpp"
#include "unionbench/parallel.hpp"

namespace unionbench {

namespace fs = std::filesystem;

PairSpec sample_pair_spec(const std::string& topic, const GenConfig& cfg, bool unionable,
                          Rng& rng) {
    PairSpec spec;
    spec.topic = topic;
    spec.t1_rows = rng.uniform_int(cfg.rows_min, cfg.rows_max);
    spec.t1_cols = rng.uniform_int(cfg.cols_min, cfg.cols_max);
    spec.t1_textuality = rng.uniform_int(cfg.textuality_min, cfg.textuality_max);
    spec.t2_rows = rng.uniform_int(cfg.rows_min, cfg.rows_max);
    spec.t2_cols = rng.uniform_int(cfg.cols_min, cfg.cols_max);
    spec.t2_textuality = rng.uniform_int(cfg.textuality_min, cfg.textuality_max);
    spec.unionable = unionable;
    if (unionable)
        spec.unionable_cols = rng.uniform_int(1, std::min(spec.t1_cols, spec.t2_cols));
    return spec;
}

std::string build_generation_prompt(const PairSpec& spec) {
    std::ostringstream p;
    p << "Create 2 tables with cells separated by |. Table 1 has " << spec.t1_rows
      << " rows, " << spec.t1_cols << " columns and " << spec.t1_textuality
      << " words, related to " << spec.topic << ". Table 2 has " << spec.t2_rows
      << " rows, " << spec.t2_cols << " columns and " << spec.t2_textuality
      << " words, related to " << spec.topic << ".";
    if (spec.unionable)
        p << " They can be unioned because they have only " << spec.unionable_cols
          << " semantically common columns, and at least 1 related row values across the"
             " tables.";
    else
        p << " They cannot be unioned because they have 0 semantically common columns.";
    p << "\nAnswer the above task in the following format:\n"
         "Table 1: {table 1}\n"
         "Table 2: {table 2}\n";
    if (spec.unionable)
        p << "Key: {key column in Table 1}\n";
    return p.str();
}

namespace {

// Marker recognizer: optional whitespace / markdown decoration, the word
// (case-insensitive), optional spaces, then ':'. The rest of the line is
// returned as inline content (bold markers stripped).
bool match_marker(const std::string& line, const char* word, std::string* inline_content) {
    size_t i = 0;
    while (i < line.size() &&
           (std::isspace(static_cast<unsigned char>(line[i])) || line[i] == '*' || line[i] == '#'))
        ++i;
    for (const char* w = word; *w; ++w, ++i) {
        if (i >= line.size())
            return false;
        if (std::tolower(static_cast<unsigned char>(line[i])) != *w)
            return false;
    }
    while (i < line.size() && line[i] == ' ')
        ++i;
    if (i >= line.size() || line[i] != ':')
        return false;
    std::string rest = line.substr(i + 1);
    std::erase(rest, '*');
    *inline_content = trim(rest);
    return true;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) {
            lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, eol - pos));
        pos = eol + 1;
    }
    return lines;
}

}  // namespace

GeneratedPair parse_generation_output(const std::string& text, const PairSpec& spec) {
    std::vector<std::string> lines = split_lines(text);

    // section 0 = preamble, 1 = table 1 block, 2 = table 2 block
    std::string blocks[3];
    bool seen[3] = {true, false, false};
    std::optional<std::string> key;
    int section = 0;
    std::string inline_content;
    for (const auto& line : lines) {
        if (match_marker(line, "table 1", &inline_content)) {
            section = 1;
            seen[1] = true;
        } else if (match_marker(line, "table 2", &inline_content)) {
            section = 2;
            seen[2] = true;
        } else if (match_marker(line, "key", &inline_content)) {
            if (!key)
                key = inline_content;
            section = 0;
            continue;
        } else {
            if (section != 0) {
                blocks[section] += line;
                blocks[section] += '\n';
            }
            continue;
        }
        if (!inline_content.empty()) {
            blocks[section] += inline_content;
            blocks[section] += '\n';
        }
    }
    if (!seen[1])
        throw MissingSectionError("completion has no \"Table 1:\" section");
    if (!seen[2])
        throw MissingSectionError("completion has no \"Table 2:\" section");

    GeneratedPair pair;
    pair.spec = spec;
    PipeParseResult r1 = parse_pipe_table(blocks[1]);
    PipeParseResult r2 = parse_pipe_table(blocks[2]);
    pair.table1 = std::move(r1.table);
    pair.table2 = std::move(r2.table);
    pair.table1.topic = spec.topic;
    pair.table2.topic = spec.topic;
    for (const auto& w : r1.warnings)
        pair.warnings.push_back("table 1: " + w);
    for (const auto& w : r2.warnings)
        pair.warnings.push_back("table 2: " + w);

    auto check_shape = [&](const char* label, const Table& t, int rows, int cols) {
        if (static_cast<int>(t.n_rows()) != rows)
            pair.warnings.push_back(std::string(label) + " has " + std::to_string(t.n_rows()) +
                                    " rows, requested " + std::to_string(rows));
        if (static_cast<int>(t.n_cols()) != cols)
            pair.warnings.push_back(std::string(label) + " has " + std::to_string(t.n_cols()) +
                                    " columns, requested " + std::to_string(cols));
    };
    check_shape("table 1", pair.table1, spec.t1_rows, spec.t1_cols);
    check_shape("table 2", pair.table2, spec.t2_rows, spec.t2_cols);

    if (spec.unionable) {
        std::string resolved;
        if (key) {
            std::string want = to_lower(trim(*key));
            for (const auto& col : pair.table1.header)
                if (to_lower(trim(col)) == want) {
                    resolved = col;
                    break;
                }
        }
        if (resolved.empty() && !pair.table1.header.empty()) {
            resolved = pair.table1.header[0];
            pair.warnings.push_back(key ? "key \"" + *key +
                                              "\" is not a table 1 column; using \"" + resolved +
                                              "\""
                                        : "key line missing; using \"" + resolved + "\"");
        }
        if (!resolved.empty())
            pair.key = resolved;
    } else if (key) {
        pair.warnings.push_back("unexpected key line on a non-unionable pair; ignored");
    }
    return pair;
}

ValidationReport validate_pair(const GeneratedPair& p) {
    ValidationReport r;
    std::set<std::string> names1;
    for (const auto& h : p.table1.header)
        names1.insert(to_lower(trim(h)));
    std::set<std::string> shared;
    for (const auto& h : p.table2.header) {
        std::string n = to_lower(trim(h));
        if (names1.count(n))
            shared.insert(n);
    }
    r.shared_header_names = static_cast<int>(shared.size());
    r.t1_row_delta = static_cast<int>(p.table1.n_rows()) - p.spec.t1_rows;
    r.t1_col_delta = static_cast<int>(p.table1.n_cols()) - p.spec.t1_cols;
    r.t2_row_delta = static_cast<int>(p.table2.n_rows()) - p.spec.t2_rows;
    r.t2_col_delta = static_cast<int>(p.table2.n_cols()) - p.spec.t2_cols;
    r.t1_empty = p.table1.n_cells() == 0;
    r.t2_empty = p.table2.n_cells() == 0;
    return r;
}

namespace {

std::string pair_code(int index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%03d", index);
    return buf;
}

struct PairSlot {
    std::string topic;
    std::string slug;
    int index = 0;
    bool unionable = false;
    std::optional<GeneratedPair> result;
    std::vector<std::string> warnings;
};

// One pair end to end, with a single fresh-spec retry. Failures leave
// slot.result empty and the reasons in slot.warnings.
void generate_one(PairSlot& slot, const GenConfig& cfg, Provider& provider) {
    uint64_t pair_seed = mix(mix(cfg.seed, slot.topic), static_cast<uint64_t>(slot.index));
    for (int attempt = 0; attempt < 2; ++attempt) {
        Rng rng(mix(pair_seed, attempt == 0 ? "spec" : "retry-spec"));
        PairSpec spec = sample_pair_spec(slot.topic, cfg, slot.unionable, rng);
        spec.pair_id = pair_code(slot.index) + (attempt == 0 ? "" : "r");
        CompletionRequest req;
        req.prompt = build_generation_prompt(spec);
        req.max_tokens = cfg.max_tokens;
        req.temperature = cfg.temperature;
        req.seed = mix(pair_seed, attempt == 0 ? "gen" : "retry-gen");
        std::string failure;
        try {
            GeneratedPair pair = parse_generation_output(provider.complete(req), spec);
            if (pair.table1.n_cols() == 0 || pair.table2.n_cols() == 0) {
                failure = "completion produced an empty table";
            } else {
                slot.result = std::move(pair);
                return;
            }
        } catch (const ProviderError& e) {
            failure = e.what();
        } catch (const DataError& e) {
            failure = e.what();
        }
        slot.warnings.push_back("attempt " + std::to_string(attempt + 1) + " failed: " + failure);
    }
}

}  // namespace

GenerationSummary generate_benchmark(const GenConfig& cfg, Provider& provider,
                                     const fs::path& out_dir,
                                     const std::string& provider_label) {
    if (cfg.topics.empty())
        throw std::invalid_argument("no topics configured");
    if (cfg.pairs_per_topic < 1)
        throw std::invalid_argument("pairs_per_topic must be >= 1");
    if (cfg.unionable_ratio < 0.0 || cfg.unionable_ratio > 1.0)
        throw std::invalid_argument("unionable_ratio must be in [0, 1]");
    for (auto [lo, hi] : {std::pair{cfg.rows_min, cfg.rows_max},
                          std::pair{cfg.cols_min, cfg.cols_max},
                          std::pair{cfg.textuality_min, cfg.textuality_max}})
        if (lo < 1 || hi < lo)
            throw std::invalid_argument("invalid sampling range [" + std::to_string(lo) + ", " +
                                        std::to_string(hi) + "]");

    int pairs = cfg.pairs_per_topic;
    int unionable_per_topic =
        static_cast<int>(std::lround(cfg.unionable_ratio * pairs));

    // Slugs name the files; guard against two topics slugging identically.
    std::map<std::string, int> slug_uses;
    std::vector<std::string> slugs;
    for (const auto& topic : cfg.topics) {
        std::string slug = slugify(topic);
        if (slug.empty())
            slug = "topic";
        int n = ++slug_uses[slug];
        if (n > 1)
            slug += "_" + std::to_string(n);
        slugs.push_back(slug);
    }

    std::vector<PairSlot> slots(cfg.topics.size() * static_cast<size_t>(pairs));
    for (size_t t = 0; t < cfg.topics.size(); ++t)
        for (int i = 0; i < pairs; ++i) {
            PairSlot& slot = slots[t * static_cast<size_t>(pairs) + static_cast<size_t>(i)];
            slot.topic = cfg.topics[t];
            slot.slug = slugs[t];
            slot.index = i;
            slot.unionable = i < unionable_per_topic;
        }

    parallel_for(slots.size(), cfg.jobs,
                 [&](size_t i) { generate_one(slots[i], cfg, provider); });

    // Single-writer assembly, deterministic regardless of worker scheduling.
    GenerationSummary summary;
    std::error_code ec;
    fs::create_directories(out_dir / "query", ec);
    fs::create_directories(out_dir / "datalake", ec);
    if (!fs::is_directory(out_dir / "query") || !fs::is_directory(out_dir / "datalake"))
        throw IoError("cannot create benchmark directories under " + out_dir.string());

    std::vector<GroundTruthPair> groundtruth;
    std::vector<std::pair<std::string, std::string>> keys;
    for (size_t t = 0; t < cfg.topics.size(); ++t) {
        const std::string& topic = cfg.topics[t];
        PairSlot* topic_slots = &slots[t * static_cast<size_t>(pairs)];
        for (int i = 0; i < pairs; ++i)
            for (const auto& w : topic_slots[i].warnings)
                summary.warnings.push_back(topic + "#" + pair_code(i) + ": " + w);

        if (!topic_slots[0].result) {
            summary.dropped_topics.push_back(topic);
            continue;
        }
        std::string query_name = slugs[t] + "_000_query.csv";
        Table query = topic_slots[0].result->table1;
        query.name = query_name;
        write_file_atomic(out_dir / "query" / query_name, serialize_csv(query));
        ++summary.tables_written;
        if (topic_slots[0].result->key)
            keys.emplace_back(query_name, *topic_slots[0].result->key);

        for (int i = 0; i < pairs; ++i) {
            PairSlot& slot = topic_slots[i];
            if (!slot.result) {
                summary.skipped_pairs.push_back(topic + "#" + pair_code(i));
                continue;
            }
            std::string dl_name = slugs[t] + "_" + pair_code(i) + "_datalake.csv";
            Table dl = slot.result->table2;
            dl.name = dl_name;
            write_file_atomic(out_dir / "datalake" / dl_name, serialize_csv(dl));
            ++summary.tables_written;
            groundtruth.push_back({query_name, dl_name,
                                   slot.unionable ? kLabelUnionable : kLabelNonUnionable,
                                   topic});
            ++summary.pairs_labeled;
            if (slot.unionable)
                ++summary.unionable;
            else
                ++summary.non_unionable;
            for (const auto& w : slot.result->warnings)
                summary.warnings.push_back(topic + "#" + pair_code(i) + ": " + w);
        }
    }

    write_groundtruth_csv(out_dir / "groundtruth.csv", groundtruth);
    write_keys_csv(out_dir / "keys.csv", keys);

    // Deliberately no wall-clock fields: a rerun with the same seed must be
    // byte-identical, manifest included.
    nlohmann::json manifest = {
        {"format", "unionbench-benchmark"},
        {"tool_version", UNIONBENCH_VERSION},
        {"seed", cfg.seed},
        {"provider", provider_label},
        {"topics", cfg.topics.size()},
        {"pairs_per_topic", cfg.pairs_per_topic},
        {"unionable_ratio", cfg.unionable_ratio},
        {"ranges",
         {{"rows", {cfg.rows_min, cfg.rows_max}},
          {"cols", {cfg.cols_min, cfg.cols_max}},
          {"textuality", {cfg.textuality_min, cfg.textuality_max}}}},
        {"counts",
         {{"tables", summary.tables_written},
          {"pairs", summary.pairs_labeled},
          {"unionable", summary.unionable},
          {"non_unionable", summary.non_unionable}}},
        {"skipped_pairs", summary.skipped_pairs},
        {"dropped_topics", summary.dropped_topics},
        {"warning_count", summary.warnings.size()},
    };
    write_file_atomic(out_dir / "manifest.json", manifest.dump(2) + "\n");
    return summary;
}

std::vector<std::string> read_topics_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("topics file not readable: " + path.string());
    std::vector<std::string> topics;
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        topics.push_back(t);
    }
    if (topics.empty())
        throw std::invalid_argument("topics file is empty: " + path.string());
    return topics;
}

}  // namespace unionbench
