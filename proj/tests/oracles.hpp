#pragma once

// Independent reference implementations the tests compare against. These
// are written in the most literal way possible — brute-force enumeration,
// no shared code with the library — so agreement is meaningful.

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

namespace oracle {

struct PrefixMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double map_all = 0.0;  // mean of P@i over every returned position
    double map_hit = 0.0;  // mean of P@i over hit positions / min(|gt|, returned)
};

// Literal prefix enumeration: for each prefix length i, rebuild the prefix
// and intersect it with gt from scratch.
inline PrefixMetrics prefix_metrics(const std::set<std::string>& gt,
                                    const std::vector<std::string>& ranked, int k) {
    PrefixMetrics m;
    std::vector<std::string> top;
    for (int i = 0; i < k && i < static_cast<int>(ranked.size()); ++i)
        top.push_back(ranked[static_cast<size_t>(i)]);

    auto hits_in = [&](const std::vector<std::string>& prefix) {
        size_t h = 0;
        for (const auto& name : prefix)
            if (gt.count(name))
                ++h;
        return h;
    };

    if (!top.empty())
        m.precision = static_cast<double>(hits_in(top)) / static_cast<double>(top.size());
    if (!gt.empty())
        m.recall = static_cast<double>(hits_in(top)) / static_cast<double>(gt.size());

    double sum_all = 0.0, sum_hit = 0.0;
    for (size_t i = 1; i <= top.size(); ++i) {
        std::vector<std::string> prefix(top.begin(), top.begin() + static_cast<long>(i));
        double p_at_i = static_cast<double>(hits_in(prefix)) / static_cast<double>(i);
        sum_all += p_at_i;
        if (gt.count(top[i - 1]))
            sum_hit += p_at_i;
    }
    if (!top.empty())
        m.map_all = sum_all / static_cast<double>(top.size());
    if (!gt.empty() && !top.empty())
        m.map_hit = sum_hit / static_cast<double>(std::min(gt.size(), top.size()));
    return m;
}

// Best one-to-one column assignment by exhaustive recursion; feasible for
// matrices up to ~6x6.
inline double best_assignment(const std::vector<std::vector<double>>& score) {
    size_t nq = score.size();
    if (nq == 0)
        return 0.0;
    size_t nt = score[0].size();
    std::vector<char> used(nt, 0);
    double best = 0.0;
    auto rec = [&](auto&& self, size_t qi, double acc) -> void {
        if (qi == nq) {
            best = std::max(best, acc);
            return;
        }
        self(self, qi + 1, acc);  // leave this query column unmatched
        for (size_t ti = 0; ti < nt; ++ti) {
            if (used[ti])
                continue;
            used[ti] = 1;
            self(self, qi + 1, acc + score[qi][ti]);
            used[ti] = 0;
        }
    };
    rec(rec, 0, 0.0);
    return best;
}

// Plain word-set Jaccard used to sanity-check embedding similarities.
inline double token_overlap(const std::string& a, const std::string& b) {
    auto tokens = [](const std::string& s) {
        std::set<std::string> out;
        std::string cur;
        for (char c : s + " ") {
            if (c == ' ' || c == '\t' || c == '\n') {
                if (!cur.empty())
                    out.insert(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        return out;
    };
    std::set<std::string> ta = tokens(a), tb = tokens(b);
    if (ta.empty() && tb.empty())
        return 0.0;
    size_t inter = 0;
    for (const auto& t : ta)
        inter += tb.count(t);
    return static_cast<double>(inter) /
           static_cast<double>(ta.size() + tb.size() - inter);
}

inline double euclidean(const std::vector<float>& a, const std::vector<float>& b) {
    double s = 0.0;
    size_t n = std::max(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
        double x = i < a.size() ? a[i] : 0.0;
        double y = i < b.size() ? b[i] : 0.0;
        s += (x - y) * (x - y);
    }
    return std::sqrt(s);
}

}  // namespace oracle
