#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "unionbench/benchmark.hpp"
#include "unionbench/provider.hpp"
#include "unionbench/table.hpp"

namespace unionbench {

// Column-pair scoring backends: Jaccard overlap of normalized distinct
// values, or cosine of mean value embeddings.
enum class Measure { Overlap, Embed };

std::string_view measure_name(Measure m);
Measure measure_from_name(const std::string& name);  // invalid_argument on unknown

// trim + lowercase + collapse internal whitespace runs to single spaces
std::string normalize_value(std::string_view raw);

// Symmetric score in [0, 1]. Overlap: Jaccard over distinct normalized
// non-null values. Embed: max(0, cosine) between the mean embeddings of
// those values (requires embedder). A column with no non-null values
// scores 0 against anything.
double column_unionability(std::span<const std::string> a, std::span<const std::string> b,
                           Measure measure, Provider* embedder = nullptr);

struct ColumnMatch {
    size_t query_col = 0;
    size_t candidate_col = 0;
    double score = 0.0;
};

struct UnionabilityScore {
    std::string query;
    std::string candidate;
    double score = 0.0;  // sum of matched column scores / max(#cols)
    std::vector<ColumnMatch> matched_columns;  // zero-score matches omitted
};

// Greedy one-to-one column alignment: repeatedly take the highest-scoring
// unmatched (query-col, candidate-col) pair, ties broken by lower column
// indices.
UnionabilityScore table_unionability(const Table& q, const Table& t, Measure measure,
                                     Provider* embedder = nullptr);

struct RankedCandidate {
    std::string name;
    double score = 0.0;
};

struct SearchResult {
    std::string query;
    std::vector<RankedCandidate> ranked;  // strictly (score desc, name asc)
    int k = 0;
    std::string method;
    std::string tie_break = "score-desc,name-asc";
};

// Precomputed per-column value index (hashes, and centroids under Embed)
// over a datalake, so many queries can be scored without re-deriving
// candidate state.
class Searcher {
public:
    Searcher(const std::vector<Table>& datalake, Measure measure, Provider* embedder = nullptr);

    SearchResult topk(const Table& query, int k) const;
    Measure measure() const { return measure_; }
    size_t size() const { return tables_.size(); }

    // The indexed table itself, or nullptr for an unknown name. Two-phase
    // search needs the raw cells back to build classification prompts.
    const Table* table(const std::string& name) const;

private:
    struct ColumnIndex {
        std::vector<uint64_t> value_hashes;  // sorted distinct
        std::vector<float> centroid;         // Embed only; empty if no values
    };
    struct TableIndex {
        std::string name;
        std::vector<ColumnIndex> columns;
    };

    ColumnIndex index_column(std::span<const std::string> values) const;
    double column_score(const ColumnIndex& a, const ColumnIndex& b) const;

    Measure measure_;
    Provider* embedder_;
    std::vector<TableIndex> tables_;
    std::vector<Table> source_;  // parallel to tables_

    friend UnionabilityScore table_unionability(const Table&, const Table&, Measure, Provider*);
};

// One-shot convenience wrapper over Searcher.
SearchResult search_topk(const Table& query, const std::vector<Table>& datalake, int k,
                         Measure measure, Provider* embedder = nullptr);

// ---------------------------------------------------------------------------
// In-context example selection

struct LabeledTablePair {
    Table table1;
    Table table2;
    bool unionable = false;
};

struct IclExample {
    Table table1;
    Table table2;
    bool unionable = false;
    double distance = 0.0;  // mean Euclidean distance to the query tables
};

// Flattens a benchmark's ground truth into candidate examples.
std::vector<LabeledTablePair> icl_pool_from_benchmark(const Benchmark& b);

// Embeds each pool pair (header + first row of both tables) and each query
// table, scores each pair by its mean Euclidean distance to all queries,
// and returns the n closest, ascending. The two benchmark ids must differ:
// drawing examples from the benchmark under evaluation is leakage and
// raises LeakageError.
std::vector<IclExample> select_icl_examples(const std::vector<Table>& queries,
                                            const std::string& query_benchmark_id,
                                            const std::vector<LabeledTablePair>& pool,
                                            const std::string& pool_benchmark_id, size_t n,
                                            Provider& embedder);

// Examples first (tables truncated to row_limit rows, each followed by its
// "Unionable: yes/no" answer), then the target pair, then the question
// block.
std::string build_classification_prompt(const Table& t1, const Table& t2,
                                        const std::vector<IclExample>& examples,
                                        size_t row_limit = 1);

enum class Verdict { Unionable, NonUnionable, Unparseable };

std::string_view verdict_name(Verdict v);

// First case-insensitive "unionable: yes|no" in the completion wins; a bare
// leading yes/no is also accepted; anything else is Unparseable.
Verdict parse_verdict(const std::string& completion);

// provider.complete + parse_verdict; provider errors propagate.
Verdict classify_pair(Provider& provider, const std::string& prompt, int max_tokens = 16,
                      double temperature = 0.0, std::optional<uint64_t> seed = std::nullopt);

// ---------------------------------------------------------------------------
// Two-phase search: candidate retrieval, then per-pair classification

struct TwoPhaseConfig {
    int k = 10;
    int multiplier = 2;  // phase 1 retrieves multiplier * k candidates
    std::vector<IclExample> examples;
    size_t row_limit = 1;
    int max_tokens = 16;
    double temperature = 0.0;
    uint64_t seed = 0;
    int jobs = 1;
};

struct ClassificationRecord {
    std::string query;
    std::string candidate;
    int phase1_rank = 0;
    Verdict verdict = Verdict::Unparseable;
    std::string raw;  // completion text ("" when the provider call failed)
};

struct ClassificationLog {
    std::vector<ClassificationRecord> records;
    size_t unparseable = 0;
    size_t provider_errors = 0;
};

// Retrieves multiplier*k candidates, classifies each (query, candidate)
// pair, and ranks accepted candidates first — both partitions keep their
// phase-1 order, which the reported scores encode as phase-1 score + 2.0
// for accepted candidates. Pairs whose classification fails (provider
// error or unparseable verdict) count as rejected, with a warning tally in
// the log; the run always completes and returns min(k, candidates) items.
SearchResult two_phase_search(const Table& query, const Searcher& searcher,
                              const TwoPhaseConfig& cfg, Provider& provider,
                              ClassificationLog* log = nullptr);

SearchResult two_phase_search(const Table& query, const std::vector<Table>& datalake,
                              const TwoPhaseConfig& cfg, Provider& provider,
                              ClassificationLog* log = nullptr);

// ---------------------------------------------------------------------------
// Results files

void write_results_csv(const std::filesystem::path& path,
                       const std::vector<SearchResult>& results);
// Rows may arrive in any order; rankings are rebuilt from the rank column.
std::vector<SearchResult> read_results_csv(const std::filesystem::path& path);

void write_classification_log_csv(const std::filesystem::path& path,
                                  const std::vector<ClassificationLog>& logs);

}  // namespace unionbench
