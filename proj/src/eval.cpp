#include "unionbench/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "unionbench/errors.hpp"

namespace unionbench {

using nlohmann::json;

std::string_view map_variant_name(MapVariant v) {
    return v == MapVariant::AllPrefixes ? "all-prefixes" : "hit-prefixes";
}

MapVariant map_variant_from_name(const std::string& name) {
    if (name == "all-prefixes")
        return MapVariant::AllPrefixes;
    if (name == "hit-prefixes")
        return MapVariant::HitPrefixes;
    throw std::invalid_argument("unknown map variant: " + name);
}

namespace {

void check_k(int k) {
    if (k < 1)
        throw std::invalid_argument("k must be >= 1");
}

size_t returned_count(const std::vector<std::string>& ranked, int k) {
    return std::min(ranked.size(), static_cast<size_t>(k));
}

}  // namespace

double precision_at_k(const std::set<std::string>& gt, const std::vector<std::string>& ranked,
                      int k) {
    check_k(k);
    size_t n = returned_count(ranked, k);
    if (n == 0)
        return 0.0;
    size_t hits = 0;
    for (size_t i = 0; i < n; ++i)
        hits += gt.count(ranked[i]);
    return static_cast<double>(hits) / static_cast<double>(n);
}

double recall_at_k(const std::set<std::string>& gt, const std::vector<std::string>& ranked,
                   int k) {
    check_k(k);
    if (gt.empty())
        return 0.0;
    size_t n = returned_count(ranked, k);
    size_t hits = 0;
    for (size_t i = 0; i < n; ++i)
        hits += gt.count(ranked[i]);
    return static_cast<double>(hits) / static_cast<double>(gt.size());
}

double map_at_k(const std::set<std::string>& gt, const std::vector<std::string>& ranked, int k,
                MapVariant variant) {
    check_k(k);
    size_t n = returned_count(ranked, k);
    if (n == 0)
        return 0.0;
    size_t hits = 0;
    double sum = 0.0;
    size_t hit_sum_count = 0;
    double hit_sum = 0.0;
    for (size_t i = 0; i < n; ++i) {
        bool hit = gt.count(ranked[i]) > 0;
        if (hit)
            ++hits;
        double p_at_i = static_cast<double>(hits) / static_cast<double>(i + 1);
        sum += p_at_i;
        if (hit) {
            hit_sum += p_at_i;
            ++hit_sum_count;
        }
    }
    if (variant == MapVariant::AllPrefixes)
        return sum / static_cast<double>(n);
    if (gt.empty())
        return 0.0;
    size_t denom = std::min(gt.size(), n);
    (void)hit_sum_count;
    return hit_sum / static_cast<double>(denom);
}

double ideal_recall(int k, size_t gt_size) {
    check_k(k);
    if (gt_size < 1)
        throw std::invalid_argument("ideal recall needs a non-empty ground truth");
    size_t cap = std::min(static_cast<size_t>(k), gt_size);
    return static_cast<double>(cap) / static_cast<double>(gt_size);
}

ConfusionMatrix confusion_matrix(const std::vector<SearchResult>& results,
                                 const std::vector<GroundTruthPair>& gt_pairs, int k,
                                 size_t* unlabeled_positives) {
    check_k(k);
    std::map<std::string, std::set<std::string>> topk;
    for (const auto& r : results) {
        auto& s = topk[r.query];
        size_t n = std::min(r.ranked.size(), static_cast<size_t>(k));
        for (size_t i = 0; i < n; ++i)
            s.insert(r.ranked[i].name);
    }

    std::map<std::string, std::set<std::string>> labeled;
    ConfusionMatrix cm;
    for (const auto& p : gt_pairs) {
        auto it = topk.find(p.query_table);
        if (it == topk.end())
            throw MissingQueryError("no ranking for query " + p.query_table);
        labeled[p.query_table].insert(p.datalake_table);
        bool predicted = it->second.count(p.datalake_table) > 0;
        if (p.is_unionable())
            predicted ? ++cm.tp : ++cm.fn;
        else
            predicted ? ++cm.fp : ++cm.tn;
    }

    if (unlabeled_positives) {
        size_t extra = 0;
        for (const auto& [query, names] : topk) {
            auto it = labeled.find(query);
            for (const auto& name : names)
                if (it == labeled.end() || !it->second.count(name))
                    ++extra;
        }
        *unlabeled_positives = extra;
    }
    return cm;
}

std::pair<double, double> accuracy_ccr(const ConfusionMatrix& cm) {
    long total = cm.total();
    if (total <= 0)
        throw std::invalid_argument("confusion matrix is empty");
    double acc = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(total);
    return {acc, 1.0 - acc};
}

TopicExtremes topic_extremes(const std::map<std::string, double>& per_topic, size_t n) {
    std::vector<std::pair<std::string, double>> entries(per_topic.begin(), per_topic.end());
    TopicExtremes ex;
    auto better = [](const auto& a, const auto& b) {
        if (a.second != b.second)
            return a.second > b.second;
        return a.first < b.first;
    };
    auto worse = [](const auto& a, const auto& b) {
        if (a.second != b.second)
            return a.second < b.second;
        return a.first < b.first;
    };
    std::sort(entries.begin(), entries.end(), better);
    for (size_t i = 0; i < entries.size() && i < n; ++i)
        ex.top.push_back(entries[i]);
    std::sort(entries.begin(), entries.end(), worse);
    for (size_t i = 0; i < entries.size() && i < n; ++i)
        ex.bottom.push_back(entries[i]);
    return ex;
}

EvalReport evaluate(const std::vector<SearchResult>& results, const Benchmark& benchmark,
                    const std::vector<int>& ks, MapVariant variant) {
    if (ks.empty())
        throw std::invalid_argument("at least one k is required");
    EvalReport report;
    report.variant = variant;
    report.ks = ks;
    std::sort(report.ks.begin(), report.ks.end());
    report.ks.erase(std::unique(report.ks.begin(), report.ks.end()), report.ks.end());
    for (int k : report.ks)
        check_k(k);
    int kmax = report.ks.back();

    std::map<std::string, std::set<std::string>> gt_sets;
    std::map<std::string, std::string> topics;
    for (const auto& p : benchmark.groundtruth) {
        if (p.is_unionable())
            gt_sets[p.query_table].insert(p.datalake_table);
        if (!p.topic.empty())
            topics.emplace(p.query_table, p.topic);
    }

    std::vector<const SearchResult*> ordered;
    for (const auto& r : results)
        ordered.push_back(&r);
    std::sort(ordered.begin(), ordered.end(),
              [](const SearchResult* a, const SearchResult* b) { return a->query < b->query; });

    for (const SearchResult* r : ordered) {
        QueryEval qe;
        qe.query = r->query;
        auto topic_it = topics.find(r->query);
        if (topic_it != topics.end()) {
            qe.topic = topic_it->second;
        } else if (const Table* q = benchmark.find_query(r->query)) {
            qe.topic = q->topic;
        }
        std::vector<std::string> names;
        for (const auto& rc : r->ranked)
            names.push_back(rc.name);
        auto gt_it = gt_sets.find(r->query);
        static const std::set<std::string> kEmpty;
        const std::set<std::string>& gt = gt_it == gt_sets.end() ? kEmpty : gt_it->second;
        qe.gt_size = gt.size();
        if (gt.empty())
            report.warnings.push_back("query " + r->query +
                                      " has no unionable ground truth; its metrics are 0");
        for (int k : report.ks) {
            qe.precision[k] = precision_at_k(gt, names, k);
            qe.recall[k] = recall_at_k(gt, names, k);
            qe.map[k] = map_at_k(gt, names, k, variant);
            qe.ideal[k] = gt.empty() ? 0.0 : ideal_recall(k, gt.size());
        }
        report.per_query.push_back(std::move(qe));
    }

    if (!report.per_query.empty()) {
        double n = static_cast<double>(report.per_query.size());
        for (int k : report.ks) {
            double p = 0, r = 0, m = 0, i = 0;
            for (const auto& qe : report.per_query) {
                p += qe.precision.at(k);
                r += qe.recall.at(k);
                m += qe.map.at(k);
                i += qe.ideal.at(k);
            }
            report.mean_precision[k] = p / n;
            report.mean_recall[k] = r / n;
            report.mean_map[k] = m / n;
            report.mean_ideal[k] = i / n;
        }
    } else {
        report.warnings.push_back("no rankings to evaluate");
        for (int k : report.ks) {
            report.mean_precision[k] = 0;
            report.mean_recall[k] = 0;
            report.mean_map[k] = 0;
            report.mean_ideal[k] = 0;
        }
    }

    report.confusion_k = kmax;
    report.confusion =
        confusion_matrix(results, benchmark.groundtruth, kmax, &report.unlabeled_positives);
    if (report.confusion.total() > 0) {
        auto [acc, ccr] = accuracy_ccr(report.confusion);
        report.acc = acc;
        report.ccr = ccr;
    } else {
        report.warnings.push_back("no labeled pairs; accuracy not computed");
    }

    std::map<std::string, std::pair<double, size_t>> topic_acc;
    for (const auto& qe : report.per_query) {
        std::string topic = qe.topic.empty() ? "(none)" : qe.topic;
        auto& [sum, count] = topic_acc[topic];
        sum += qe.map.at(kmax);
        ++count;
    }
    for (const auto& [topic, acc] : topic_acc)
        report.per_topic_map[topic] = acc.first / static_cast<double>(acc.second);

    return report;
}

std::string report_to_json(const EvalReport& report) {
    json j;
    j["map_variant"] = std::string(map_variant_name(report.variant));
    j["ks"] = report.ks;
    auto by_k = [](const std::map<int, double>& m) {
        json o = json::object();
        for (const auto& [k, v] : m)
            o[std::to_string(k)] = v;
        return o;
    };
    j["mean"] = {{"precision", by_k(report.mean_precision)},
                 {"recall", by_k(report.mean_recall)},
                 {"map", by_k(report.mean_map)},
                 {"ideal_recall", by_k(report.mean_ideal)}};
    j["confusion"] = {{"k", report.confusion_k},
                      {"tp", report.confusion.tp},
                      {"fp", report.confusion.fp},
                      {"tn", report.confusion.tn},
                      {"fn", report.confusion.fn}};
    j["accuracy"] = report.acc;
    j["corner_case_ratio"] = report.ccr;
    j["unlabeled_positives"] = report.unlabeled_positives;
    j["per_topic_map"] = report.per_topic_map;
    TopicExtremes ex = topic_extremes(report.per_topic_map);
    json top = json::array(), bottom = json::array();
    for (const auto& [t, v] : ex.top)
        top.push_back({{"topic", t}, {"map", v}});
    for (const auto& [t, v] : ex.bottom)
        bottom.push_back({{"topic", t}, {"map", v}});
    j["top_topics"] = top;
    j["bottom_topics"] = bottom;
    json per_query = json::array();
    for (const auto& qe : report.per_query) {
        per_query.push_back({{"query", qe.query},
                             {"topic", qe.topic},
                             {"gt_size", qe.gt_size},
                             {"precision", by_k(qe.precision)},
                             {"recall", by_k(qe.recall)},
                             {"map", by_k(qe.map)},
                             {"ideal_recall", by_k(qe.ideal)}});
    }
    j["per_query"] = per_query;
    j["warnings"] = report.warnings;
    return j.dump(2) + "\n";
}

std::string report_to_text(const EvalReport& report) {
    std::ostringstream out;
    char buf[160];
    out << "map variant: " << map_variant_name(report.variant) << "\n";
    std::snprintf(buf, sizeof buf, "%6s %10s %10s %10s %13s\n", "k", "precision", "recall", "map",
                  "ideal_recall");
    out << buf;
    for (int k : report.ks) {
        std::snprintf(buf, sizeof buf, "%6d %10.4f %10.4f %10.4f %13.4f\n", k,
                      report.mean_precision.at(k), report.mean_recall.at(k),
                      report.mean_map.at(k), report.mean_ideal.at(k));
        out << buf;
    }
    std::snprintf(buf, sizeof buf,
                  "confusion @ k=%d: tp=%ld fp=%ld tn=%ld fn=%ld\n", report.confusion_k,
                  report.confusion.tp, report.confusion.fp, report.confusion.tn,
                  report.confusion.fn);
    out << buf;
    std::snprintf(buf, sizeof buf, "accuracy %.4f  corner-case ratio %.4f\n", report.acc,
                  report.ccr);
    out << buf;
    out << "unlabeled positives in top-" << report.confusion_k << ": "
        << report.unlabeled_positives << "\n";
    TopicExtremes ex = topic_extremes(report.per_topic_map);
    if (!ex.top.empty()) {
        out << "top topics by map@" << report.confusion_k << ":\n";
        for (const auto& [t, v] : ex.top) {
            std::snprintf(buf, sizeof buf, "  %-28s %.4f\n", t.c_str(), v);
            out << buf;
        }
        out << "bottom topics by map@" << report.confusion_k << ":\n";
        for (const auto& [t, v] : ex.bottom) {
            std::snprintf(buf, sizeof buf, "  %-28s %.4f\n", t.c_str(), v);
            out << buf;
        }
    }
    for (const auto& w : report.warnings)
        out << "warning: " << w << "\n";
    return out.str();
}

}  // namespace unionbench
