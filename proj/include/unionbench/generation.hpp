#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "unionbench/pair_spec.hpp"
#include "unionbench/provider.hpp"
#include "unionbench/rng.hpp"
#include "unionbench/table.hpp"

namespace unionbench {

// Benchmark-generation parameters. Defaults reproduce the full layout:
// 50 topics x (1 query + 20 datalake tables) with a 50/50 label split.
struct GenConfig {
    std::vector<std::string> topics;
    int pairs_per_topic = 20;
    double unionable_ratio = 0.5;
    uint64_t seed = 0;
    int rows_min = 4, rows_max = 12;
    int cols_min = 5, cols_max = 14;
    int textuality_min = 1, textuality_max = 8;  // words per value
    int jobs = 1;
    int max_tokens = 1024;
    double temperature = 0.7;
};

// A parsed completion: the two tables, the declared key column (present iff
// the pair was requested unionable), the spec that produced it, and any
// repair warnings collected along the way.
struct GeneratedPair {
    Table table1;  // query-side
    Table table2;  // datalake-side
    std::optional<std::string> key;
    PairSpec spec;
    std::vector<std::string> warnings;
};

// Quality signals for one generated pair; informational only.
struct ValidationReport {
    int shared_header_names = 0;  // distinct case-folded names in both headers
    int t1_row_delta = 0;         // actual - requested
    int t1_col_delta = 0;
    int t2_row_delta = 0;
    int t2_col_delta = 0;
    bool t1_empty = false;
    bool t2_empty = false;
};

struct GenerationSummary {
    size_t tables_written = 0;
    size_t pairs_labeled = 0;
    size_t unionable = 0;
    size_t non_unionable = 0;
    std::vector<std::string> skipped_pairs;   // failed twice, left out
    std::vector<std::string> dropped_topics;  // query pair failed twice
    std::vector<std::string> warnings;
};

// Draws shapes and textuality uniformly from the configured ranges. The
// unionable flag is decided by the caller (label-ratio controlled); when
// set, unionable_cols is drawn from [1, min(t1_cols, t2_cols)].
PairSpec sample_pair_spec(const std::string& topic, const GenConfig& cfg, bool unionable,
                          Rng& rng);

// Renders the table-pair generation prompt: the parameter sentence, one of
// the two unionability sentences, then the answer-format block (with its
// "Key:" line iff unionable).
std::string build_generation_prompt(const PairSpec& spec);

// Splits completion text on the "Table 1:" / "Table 2:" / "Key:" markers
// (case-insensitive, tolerant of leading whitespace and markdown bold) and
// pipe-parses each table block. Shape mismatches against the spec become
// warnings, never errors. A missing or invalid key column on a unionable
// pair is replaced by table1's first column, with a warning. Throws
// MissingSectionError when a table marker is absent.
GeneratedPair parse_generation_output(const std::string& text, const PairSpec& spec);

ValidationReport validate_pair(const GeneratedPair& p);

// Runs the full pipeline: per (topic, pair) sample a spec, prompt the
// provider, parse, and assemble the benchmark directory (query/, datalake/,
// groundtruth.csv, keys.csv, manifest.json). Pair i of a topic is labeled
// unionable iff i < round(ratio * pairs_per_topic); table1 of pair 0 is the
// topic's query table and later table1s are discarded. A failed pair is
// retried once with a fresh spec, then skipped; if the query pair (pair 0)
// fails twice the whole topic is dropped. provider_label goes into the
// manifest (never any credentials).
GenerationSummary generate_benchmark(const GenConfig& cfg, Provider& provider,
                                     const std::filesystem::path& out_dir,
                                     const std::string& provider_label = "stub");

// One topic per line; blank lines and lines starting with '#' are skipped.
// Unreadable or empty files are a usage error (std::invalid_argument).
std::vector<std::string> read_topics_file(const std::filesystem::path& path);

}  // namespace unionbench
