#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "unionbench/table.hpp"

namespace unionbench {

inline constexpr const char* kLabelUnionable = "unionable";
inline constexpr const char* kLabelNonUnionable = "non-unionable";

// One labeled (query, datalake) pair of the ground truth.
struct GroundTruthPair {
    std::string query_table;     // filename under query/
    std::string datalake_table;  // filename under datalake/
    std::string label;           // kLabelUnionable or kLabelNonUnionable
    std::string topic;

    bool is_unionable() const { return label == kLabelUnionable; }
};

// In-memory view of a benchmark directory:
//   query/*.csv  datalake/*.csv  groundtruth.csv  keys.csv  manifest.json
struct Benchmark {
    std::filesystem::path root;
    std::vector<Table> queries;
    std::vector<Table> datalake;
    std::vector<GroundTruthPair> groundtruth;
    std::vector<std::pair<std::string, std::string>> keys;  // query file -> key column
    std::vector<std::string> warnings;

    // Identity used by the in-context-example leakage guard: the canonical
    // directory path, so the same directory under two spellings still
    // counts as the same benchmark.
    std::string id() const;

    const Table* find_query(const std::string& name) const;
    const Table* find_datalake(const std::string& name) const;
};

// Loads and validates a benchmark directory. Layout problems (missing
// query/, datalake/ or groundtruth.csv) raise LayoutError; ground-truth
// rows referencing missing files or duplicate pairs raise DataError.
// Tables are loaded in sorted filename order; topics are attached from the
// ground truth.
Benchmark load_benchmark(const std::filesystem::path& root);

void write_groundtruth_csv(const std::filesystem::path& path,
                           const std::vector<GroundTruthPair>& pairs);
std::vector<GroundTruthPair> read_groundtruth_csv(const std::filesystem::path& path);

void write_keys_csv(const std::filesystem::path& path,
                    const std::vector<std::pair<std::string, std::string>>& keys);
std::vector<std::pair<std::string, std::string>> read_keys_csv(const std::filesystem::path& path);

// Writes text to path atomically (temp file + rename).
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace unionbench
