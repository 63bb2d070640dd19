#include "unionbench/benchmark.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "unionbench/errors.hpp"

namespace unionbench {

namespace fs = std::filesystem;

std::string Benchmark::id() const {
    std::error_code ec;
    fs::path canon = fs::weakly_canonical(root, ec);
    return (ec ? root.lexically_normal() : canon).string();
}

const Table* Benchmark::find_query(const std::string& name) const {
    for (const auto& t : queries)
        if (t.name == name)
            return &t;
    return nullptr;
}

const Table* Benchmark::find_datalake(const std::string& name) const {
    for (const auto& t : datalake)
        if (t.name == name)
            return &t;
    return nullptr;
}

namespace {

std::vector<Table> load_side(const fs::path& dir, std::vector<std::string>* warnings) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".csv")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::vector<Table> tables;
    for (const auto& file : files) {
        std::vector<std::string> table_warnings;
        Table t = parse_csv(read_file(file), &table_warnings);
        t.name = file.filename().string();
        for (auto& w : table_warnings)
            warnings->push_back(t.name + ": " + w);
        tables.push_back(std::move(t));
    }
    return tables;
}

}  // namespace

Benchmark load_benchmark(const fs::path& root) {
    if (!fs::is_directory(root))
        throw LayoutError("benchmark directory not found: " + root.string());
    for (const char* sub : {"query", "datalake"})
        if (!fs::is_directory(root / sub))
            throw LayoutError("benchmark is missing the " + std::string(sub) +
                              "/ directory: " + root.string());
    fs::path gt_path = root / "groundtruth.csv";
    if (!fs::is_regular_file(gt_path))
        throw LayoutError("benchmark is missing groundtruth.csv: " + root.string());

    Benchmark b;
    b.root = root;
    b.queries = load_side(root / "query", &b.warnings);
    b.datalake = load_side(root / "datalake", &b.warnings);
    b.groundtruth = read_groundtruth_csv(gt_path);
    if (fs::is_regular_file(root / "keys.csv"))
        b.keys = read_keys_csv(root / "keys.csv");

    // Every ground-truth row must reference real files.
    std::set<std::string> query_names, datalake_names;
    for (const auto& t : b.queries)
        query_names.insert(t.name);
    for (const auto& t : b.datalake)
        datalake_names.insert(t.name);
    for (const auto& pair : b.groundtruth) {
        if (!query_names.count(pair.query_table))
            throw DataError("groundtruth references missing query table: " + pair.query_table);
        if (!datalake_names.count(pair.datalake_table))
            throw DataError("groundtruth references missing datalake table: " +
                            pair.datalake_table);
    }

    // Attach topics from the ground truth.
    for (auto& t : b.queries)
        for (const auto& pair : b.groundtruth)
            if (pair.query_table == t.name) {
                t.topic = pair.topic;
                break;
            }
    for (auto& t : b.datalake)
        for (const auto& pair : b.groundtruth)
            if (pair.datalake_table == t.name) {
                t.topic = pair.topic;
                break;
            }

    for (const auto& [query, key] : b.keys) {
        const Table* q = b.find_query(query);
        if (!q) {
            b.warnings.push_back("keys.csv names unknown query table: " + query);
            continue;
        }
        if (std::find(q->header.begin(), q->header.end(), key) == q->header.end())
            b.warnings.push_back("key column \"" + key + "\" not found in " + query);
    }
    return b;
}

void write_groundtruth_csv(const fs::path& path, const std::vector<GroundTruthPair>& pairs) {
    Table t;
    t.header = {"query_table", "data_lake_table", "label", "topic"};
    for (const auto& p : pairs)
        t.rows.push_back({p.query_table, p.datalake_table, p.label, p.topic});
    write_file_atomic(path, serialize_csv(t));
}

std::vector<GroundTruthPair> read_groundtruth_csv(const fs::path& path) {
    Table t = parse_csv(read_file(path));
    const std::vector<std::string> expected = {"query_table", "data_lake_table", "label",
                                               "topic"};
    if (t.header != expected)
        throw DataError("unexpected groundtruth.csv header in " + path.string());
    std::vector<GroundTruthPair> pairs;
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& row : t.rows) {
        GroundTruthPair p{row[0], row[1], row[2], row[3]};
        if (p.label != kLabelUnionable && p.label != kLabelNonUnionable)
            throw DataError("invalid label \"" + p.label + "\" in " + path.string());
        if (!seen.insert({p.query_table, p.datalake_table}).second)
            throw DataError("duplicate pair (" + p.query_table + ", " + p.datalake_table +
                            ") in " + path.string());
        pairs.push_back(std::move(p));
    }
    return pairs;
}

void write_keys_csv(const fs::path& path,
                    const std::vector<std::pair<std::string, std::string>>& keys) {
    Table t;
    t.header = {"query_table", "key_column"};
    for (const auto& [query, key] : keys)
        t.rows.push_back({query, key});
    write_file_atomic(path, serialize_csv(t));
}

std::vector<std::pair<std::string, std::string>> read_keys_csv(const fs::path& path) {
    Table t = parse_csv(read_file(path));
    const std::vector<std::string> expected = {"query_table", "key_column"};
    if (t.header != expected)
        throw DataError("unexpected keys.csv header in " + path.string());
    std::vector<std::pair<std::string, std::string>> keys;
    for (const auto& row : t.rows)
        keys.emplace_back(row[0], row[1]);
    return keys;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out)
            throw IoError("short write to " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec)
        throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " +
                      ec.message());
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace unionbench
