#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "unionbench/benchmark.hpp"
#include "unionbench/search.hpp"

namespace unionbench {

// MAP@k averages the prefix precision P@i. AllPrefixes averages over every
// returned position i = 1..|returned| (the default); HitPrefixes averages
// only positions that hit the ground truth, normalized by
// min(|gt|, |returned|), which is the convention many IR systems use.
enum class MapVariant { AllPrefixes, HitPrefixes };

std::string_view map_variant_name(MapVariant v);
MapVariant map_variant_from_name(const std::string& name);  // invalid_argument

// P@k = |gt ∩ top-k| / |top-k| where the denominator is the number of
// results actually returned (<= k). Empty ranking -> 0.
double precision_at_k(const std::set<std::string>& gt, const std::vector<std::string>& ranked,
                      int k);

// R@k = |gt ∩ top-k| / |gt|. Defined as 0 when gt is empty (callers warn).
double recall_at_k(const std::set<std::string>& gt, const std::vector<std::string>& ranked,
                   int k);

double map_at_k(const std::set<std::string>& gt, const std::vector<std::string>& ranked, int k,
                MapVariant variant = MapVariant::AllPrefixes);

// min(k, gt_size) / gt_size: the recall ceiling at cutoff k.
// gt_size must be >= 1.
double ideal_recall(int k, size_t gt_size);

struct ConfusionMatrix {
    long tp = 0;
    long fp = 0;
    long tn = 0;
    long fn = 0;

    long total() const { return tp + fp + tn + fn; }
};

// Cross-tabulates labeled pairs against the rankings: a labeled pair is
// predicted unionable iff its datalake table appears in its query's top-k.
// Top-k entries with no label for that query are excluded and tallied into
// *unlabeled_positives. Raises MissingQueryError when a labeled pair's
// query has no ranking.
ConfusionMatrix confusion_matrix(const std::vector<SearchResult>& results,
                                 const std::vector<GroundTruthPair>& gt_pairs, int k,
                                 size_t* unlabeled_positives = nullptr);

// acc = (tp+tn)/total, ccr = 1 - acc. Total must be > 0.
std::pair<double, double> accuracy_ccr(const ConfusionMatrix& cm);

struct QueryEval {
    std::string query;
    std::string topic;
    size_t gt_size = 0;                 // labeled-unionable candidates for this query
    std::map<int, double> precision;    // keyed by k
    std::map<int, double> recall;
    std::map<int, double> map;
    std::map<int, double> ideal;        // 0 when gt is empty
};

struct EvalReport {
    MapVariant variant = MapVariant::AllPrefixes;
    std::vector<int> ks;                       // sorted, distinct
    std::vector<QueryEval> per_query;          // sorted by query name
    std::map<int, double> mean_precision;
    std::map<int, double> mean_recall;
    std::map<int, double> mean_map;
    std::map<int, double> mean_ideal;
    int confusion_k = 0;                       // = max requested k
    ConfusionMatrix confusion;
    double acc = 0.0;
    double ccr = 0.0;
    size_t unlabeled_positives = 0;
    std::map<std::string, double> per_topic_map;  // MAP at max k
    std::vector<std::string> warnings;
};

// Per-topic mean of the per-query MAP values; ties in the extremes are
// broken by topic name.
struct TopicExtremes {
    std::vector<std::pair<std::string, double>> top;     // best first
    std::vector<std::pair<std::string, double>> bottom;  // worst first
};

TopicExtremes topic_extremes(const std::map<std::string, double>& per_topic, size_t n = 5);

// Scores rankings against a benchmark's ground truth. Rankings for queries
// without any ground truth score 0 with a warning; the confusion matrix is
// computed at the largest requested k.
EvalReport evaluate(const std::vector<SearchResult>& results, const Benchmark& benchmark,
                    const std::vector<int>& ks,
                    MapVariant variant = MapVariant::AllPrefixes);

std::string report_to_json(const EvalReport& report);
std::string report_to_text(const EvalReport& report);

}  // namespace unionbench
