#include "unionbench/search.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

#include "unionbench/errors.hpp"
#include "unionbench/parallel.hpp"
#include "unionbench/rng.hpp"

namespace unionbench {

namespace fs = std::filesystem;

std::string_view measure_name(Measure m) {
    return m == Measure::Overlap ? "overlap" : "embed";
}

Measure measure_from_name(const std::string& name) {
    if (name == "overlap")
        return Measure::Overlap;
    if (name == "embed")
        return Measure::Embed;
    throw std::invalid_argument("unknown measure: " + name);
}

std::string normalize_value(std::string_view raw) {
    std::string out;
    bool pending_space = false;
    for (char ch : raw) {
        unsigned char c = static_cast<unsigned char>(ch);
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

namespace {

std::vector<std::string> distinct_normalized(std::span<const std::string> values) {
    std::set<std::string> s;
    for (const auto& v : values) {
        std::string n = normalize_value(v);
        if (!n.empty())
            s.insert(std::move(n));
    }
    return {s.begin(), s.end()};
}

double cosine(const std::vector<float>& a, const std::vector<float>& b) {
    if (a.empty() || b.empty() || a.size() != b.size())
        return 0.0;
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        dot += static_cast<double>(a[i]) * b[i];
        na += static_cast<double>(a[i]) * a[i];
        nb += static_cast<double>(b[i]) * b[i];
    }
    if (na == 0.0 || nb == 0.0)
        return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<float> mean_embedding(const std::vector<std::string>& values, Provider& embedder) {
    std::vector<float> mean;
    for (const auto& v : values) {
        std::vector<float> e = embedder.embed(v);
        if (mean.empty())
            mean.assign(e.size(), 0.0f);
        for (size_t i = 0; i < e.size() && i < mean.size(); ++i)
            mean[i] += e[i];
    }
    if (!values.empty())
        for (float& x : mean)
            x /= static_cast<float>(values.size());
    return mean;
}

double jaccard_sorted(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b) {
    if (a.empty() || b.empty())
        return 0.0;
    size_t i = 0, j = 0, inter = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) {
            ++inter;
            ++i;
            ++j;
        } else if (a[i] < b[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace

double column_unionability(std::span<const std::string> a, std::span<const std::string> b,
                           Measure measure, Provider* embedder) {
    std::vector<std::string> da = distinct_normalized(a);
    std::vector<std::string> db = distinct_normalized(b);
    if (da.empty() || db.empty())
        return 0.0;
    if (measure == Measure::Overlap) {
        size_t inter = 0;
        std::set<std::string> sb(db.begin(), db.end());
        for (const auto& v : da)
            inter += sb.count(v);
        size_t uni = da.size() + db.size() - inter;
        return static_cast<double>(inter) / static_cast<double>(uni);
    }
    if (!embedder)
        throw std::invalid_argument("embed measure needs an embedding provider");
    double c = cosine(mean_embedding(da, *embedder), mean_embedding(db, *embedder));
    return std::max(0.0, c);
}

// ---------------------------------------------------------------------------
// Greedy alignment shared by table_unionability and the Searcher

namespace {

struct ScoredPair {
    double score;
    size_t qi, ti;
};

// Picks highest-score pairs one-to-one; ties go to the lower column
// indices. Returns the kept pairs (score > 0 only).
std::vector<ScoredPair> greedy_match(std::vector<ScoredPair>& pairs, size_t nq, size_t nt) {
    std::sort(pairs.begin(), pairs.end(), [](const ScoredPair& a, const ScoredPair& b) {
        if (a.score != b.score)
            return a.score > b.score;
        if (a.qi != b.qi)
            return a.qi < b.qi;
        return a.ti < b.ti;
    });
    std::vector<char> q_used(nq, 0), t_used(nt, 0);
    std::vector<ScoredPair> kept;
    for (const auto& p : pairs) {
        if (p.score <= 0.0)
            break;  // sorted: nothing positive remains
        if (q_used[p.qi] || t_used[p.ti])
            continue;
        q_used[p.qi] = 1;
        t_used[p.ti] = 1;
        kept.push_back(p);
    }
    return kept;
}

}  // namespace

Searcher::ColumnIndex Searcher::index_column(std::span<const std::string> values) const {
    ColumnIndex idx;
    std::vector<std::string> distinct = distinct_normalized(values);
    idx.value_hashes.reserve(distinct.size());
    for (const auto& v : distinct)
        idx.value_hashes.push_back(fnv1a64(v));
    std::sort(idx.value_hashes.begin(), idx.value_hashes.end());
    idx.value_hashes.erase(std::unique(idx.value_hashes.begin(), idx.value_hashes.end()),
                           idx.value_hashes.end());
    if (measure_ == Measure::Embed && !distinct.empty())
        idx.centroid = mean_embedding(distinct, *embedder_);
    return idx;
}

double Searcher::column_score(const ColumnIndex& a, const ColumnIndex& b) const {
    if (measure_ == Measure::Overlap)
        return jaccard_sorted(a.value_hashes, b.value_hashes);
    return std::max(0.0, cosine(a.centroid, b.centroid));
}

Searcher::Searcher(const std::vector<Table>& datalake, Measure measure, Provider* embedder)
    : measure_(measure), embedder_(embedder) {
    if (measure_ == Measure::Embed && !embedder_)
        throw std::invalid_argument("embed measure needs an embedding provider");
    tables_.reserve(datalake.size());
    for (const auto& t : datalake) {
        TableIndex ti;
        ti.name = t.name;
        for (size_t c = 0; c < t.n_cols(); ++c)
            ti.columns.push_back(index_column(t.column(c)));
        tables_.push_back(std::move(ti));
    }
    source_ = datalake;
}

const Table* Searcher::table(const std::string& name) const {
    for (const auto& t : source_)
        if (t.name == name)
            return &t;
    return nullptr;
}

SearchResult Searcher::topk(const Table& query, int k) const {
    if (k < 1)
        throw std::invalid_argument("k must be >= 1");
    std::vector<ColumnIndex> qcols;
    for (size_t c = 0; c < query.n_cols(); ++c)
        qcols.push_back(index_column(query.column(c)));

    std::vector<RankedCandidate> scored;
    scored.reserve(tables_.size());
    for (const auto& cand : tables_) {
        std::vector<ScoredPair> pairs;
        pairs.reserve(qcols.size() * cand.columns.size());
        for (size_t qi = 0; qi < qcols.size(); ++qi)
            for (size_t ti = 0; ti < cand.columns.size(); ++ti)
                pairs.push_back({column_score(qcols[qi], cand.columns[ti]), qi, ti});
        double sum = 0.0;
        for (const auto& m : greedy_match(pairs, qcols.size(), cand.columns.size()))
            sum += m.score;
        size_t denom = std::max(qcols.size(), cand.columns.size());
        scored.push_back({cand.name, denom ? sum / static_cast<double>(denom) : 0.0});
    }
    std::sort(scored.begin(), scored.end(), [](const RankedCandidate& a, const RankedCandidate& b) {
        if (a.score != b.score)
            return a.score > b.score;
        return a.name < b.name;
    });
    if (scored.size() > static_cast<size_t>(k))
        scored.resize(static_cast<size_t>(k));

    SearchResult r;
    r.query = query.name;
    r.ranked = std::move(scored);
    r.k = k;
    r.method = std::string(measure_name(measure_));
    return r;
}

UnionabilityScore table_unionability(const Table& q, const Table& t, Measure measure,
                                     Provider* embedder) {
    UnionabilityScore s;
    s.query = q.name;
    s.candidate = t.name;
    if (q.n_cols() == 0 || t.n_cols() == 0)
        return s;

    std::vector<ScoredPair> pairs;
    for (size_t qi = 0; qi < q.n_cols(); ++qi) {
        std::vector<std::string> qvals = q.column(qi);
        for (size_t ti = 0; ti < t.n_cols(); ++ti) {
            double v = column_unionability(qvals, t.column(ti), measure, embedder);
            pairs.push_back({v, qi, ti});
        }
    }
    double sum = 0.0;
    for (const auto& m : greedy_match(pairs, q.n_cols(), t.n_cols())) {
        sum += m.score;
        s.matched_columns.push_back({m.qi, m.ti, m.score});
    }
    s.score = sum / static_cast<double>(std::max(q.n_cols(), t.n_cols()));
    return s;
}

SearchResult search_topk(const Table& query, const std::vector<Table>& datalake, int k,
                         Measure measure, Provider* embedder) {
    return Searcher(datalake, measure, embedder).topk(query, k);
}

// ---------------------------------------------------------------------------
// In-context example selection

std::vector<LabeledTablePair> icl_pool_from_benchmark(const Benchmark& b) {
    std::vector<LabeledTablePair> pool;
    for (const auto& gt : b.groundtruth) {
        const Table* q = b.find_query(gt.query_table);
        const Table* d = b.find_datalake(gt.datalake_table);
        if (q && d)
            pool.push_back({*q, *d, gt.is_unionable()});
    }
    return pool;
}

namespace {

std::string icl_example_text(const Table& t1, const Table& t2) {
    return serialize_pipe_table(t1, 1) + serialize_pipe_table(t2, 1);
}

double euclidean(const std::vector<float>& a, const std::vector<float>& b) {
    size_t n = std::min(a.size(), b.size());
    double sum = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double d = static_cast<double>(a[i]) - b[i];
        sum += d * d;
    }
    for (size_t i = n; i < a.size(); ++i)
        sum += static_cast<double>(a[i]) * a[i];
    for (size_t i = n; i < b.size(); ++i)
        sum += static_cast<double>(b[i]) * b[i];
    return std::sqrt(sum);
}

}  // namespace

std::vector<IclExample> select_icl_examples(const std::vector<Table>& queries,
                                            const std::string& query_benchmark_id,
                                            const std::vector<LabeledTablePair>& pool,
                                            const std::string& pool_benchmark_id, size_t n,
                                            Provider& embedder) {
    if (query_benchmark_id == pool_benchmark_id)
        throw LeakageError("in-context examples must come from a different benchmark than the"
                           " queries (both ids are \"" +
                           pool_benchmark_id + "\")");
    if (pool.empty())
        throw std::invalid_argument("example pool is empty");
    if (n > pool.size())
        throw std::invalid_argument("asked for " + std::to_string(n) + " examples from a pool of " +
                                    std::to_string(pool.size()));

    std::vector<std::vector<float>> query_embeddings;
    for (const auto& q : queries)
        query_embeddings.push_back(embedder.embed(serialize_pipe_table(q, 1)));

    struct Scored {
        double distance;
        std::string text;
        size_t index;
    };
    std::vector<Scored> scored;
    for (size_t i = 0; i < pool.size(); ++i) {
        std::string text = icl_example_text(pool[i].table1, pool[i].table2);
        std::vector<float> e = embedder.embed(text);
        double sum = 0.0;
        for (const auto& qe : query_embeddings)
            sum += euclidean(e, qe);
        double mean = query_embeddings.empty()
                          ? 0.0
                          : sum / static_cast<double>(query_embeddings.size());
        scored.push_back({mean, std::move(text), i});
    }
    // Tie-break on the serialized text so the result does not depend on
    // pool order.
    std::sort(scored.begin(), scored.end(), [&](const Scored& a, const Scored& b) {
        if (a.distance != b.distance)
            return a.distance < b.distance;
        if (a.text != b.text)
            return a.text < b.text;
        return pool[a.index].unionable < pool[b.index].unionable;
    });

    std::vector<IclExample> out;
    for (size_t i = 0; i < n; ++i) {
        const LabeledTablePair& p = pool[scored[i].index];
        out.push_back({p.table1, p.table2, p.unionable, scored[i].distance});
    }
    return out;
}

std::string build_classification_prompt(const Table& t1, const Table& t2,
                                        const std::vector<IclExample>& examples,
                                        size_t row_limit) {
    if (row_limit < 1)
        throw std::invalid_argument("row_limit must be >= 1");
    std::string prompt;
    for (const auto& e : examples) {
        prompt += "Table 1:\n";
        prompt += serialize_pipe_table(e.table1, row_limit);
        prompt += "Table 2:\n";
        prompt += serialize_pipe_table(e.table2, row_limit);
        prompt += e.unionable ? "Unionable: yes\n\n" : "Unionable: no\n\n";
    }
    prompt += "Table 1:\n";
    prompt += serialize_pipe_table(t1, row_limit);
    prompt += "Table 2:\n";
    prompt += serialize_pipe_table(t2, row_limit);
    prompt += "\n";
    prompt += "Are the following tables unionable? Answer in the following format:\n"
              "Unionable: {yes/no}";
    return prompt;
}

std::string_view verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Unionable: return "unionable";
        case Verdict::NonUnionable: return "non-unionable";
        case Verdict::Unparseable: return "unparseable";
    }
    return "?";
}

namespace {

// True when text[pos..] starts with `word` followed by a non-letter (or
// the end of text).
bool word_at(const std::string& text, size_t pos, std::string_view word) {
    if (text.compare(pos, word.size(), word) != 0)
        return false;
    size_t end = pos + word.size();
    return end >= text.size() || !std::isalpha(static_cast<unsigned char>(text[end]));
}

}  // namespace

Verdict parse_verdict(const std::string& completion) {
    std::string text = to_lower(completion);
    size_t pos = 0;
    while ((pos = text.find("unionable", pos)) != std::string::npos) {
        size_t i = pos + 9;
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t'))
            ++i;
        if (i < text.size() && text[i] == ':') {
            ++i;
            while (i < text.size() && (text[i] == ' ' || text[i] == '\t'))
                ++i;
            if (word_at(text, i, "yes"))
                return Verdict::Unionable;
            if (word_at(text, i, "no"))
                return Verdict::NonUnionable;
        }
        pos += 9;
    }
    // bare leading yes/no
    size_t start = 0;
    while (start < text.size() && !std::isalnum(static_cast<unsigned char>(text[start])))
        ++start;
    if (word_at(text, start, "yes"))
        return Verdict::Unionable;
    if (word_at(text, start, "no"))
        return Verdict::NonUnionable;
    return Verdict::Unparseable;
}

Verdict classify_pair(Provider& provider, const std::string& prompt, int max_tokens,
                      double temperature, std::optional<uint64_t> seed) {
    CompletionRequest req;
    req.prompt = prompt;
    req.max_tokens = max_tokens;
    req.temperature = temperature;
    req.seed = seed;
    return parse_verdict(provider.complete(req));
}

// ---------------------------------------------------------------------------
// Two-phase search

SearchResult two_phase_search(const Table& query, const Searcher& searcher,
                              const TwoPhaseConfig& cfg, Provider& provider,
                              ClassificationLog* log) {
    if (cfg.multiplier < 1)
        throw std::invalid_argument("candidate multiplier must be >= 1");
    SearchResult phase1 = searcher.topk(query, cfg.k * cfg.multiplier);

    size_t n = phase1.ranked.size();
    std::vector<ClassificationRecord> records(n);
    std::vector<char> failed(n, 0);
    parallel_for(n, cfg.jobs, [&](size_t i) {
        const std::string& cand_name = phase1.ranked[i].name;
        const Table* cand = searcher.table(cand_name);
        ClassificationRecord& rec = records[i];
        rec.query = query.name;
        rec.candidate = cand_name;
        rec.phase1_rank = static_cast<int>(i) + 1;
        if (!cand) {
            failed[i] = 1;
            return;
        }
        std::string prompt =
            build_classification_prompt(query, *cand, cfg.examples, cfg.row_limit);
        CompletionRequest req;
        req.prompt = prompt;
        req.max_tokens = cfg.max_tokens;
        req.temperature = cfg.temperature;
        req.seed = mix(mix(cfg.seed, query.name), cand_name);
        try {
            rec.raw = provider.complete(req);
            rec.verdict = parse_verdict(rec.raw);
        } catch (const ProviderError&) {
            failed[i] = 1;
            rec.verdict = Verdict::Unparseable;
        }
    });

    SearchResult out;
    out.query = query.name;
    out.k = cfg.k;
    out.method = "two-phase";
    // Accepted candidates first, each partition in phase-1 order; the +2.0
    // offset keeps the score column consistent with that ordering.
    for (size_t i = 0; i < n && out.ranked.size() < static_cast<size_t>(cfg.k); ++i)
        if (records[i].verdict == Verdict::Unionable)
            out.ranked.push_back({phase1.ranked[i].name, phase1.ranked[i].score + 2.0});
    for (size_t i = 0; i < n && out.ranked.size() < static_cast<size_t>(cfg.k); ++i)
        if (records[i].verdict != Verdict::Unionable)
            out.ranked.push_back({phase1.ranked[i].name, phase1.ranked[i].score});

    if (log) {
        for (size_t i = 0; i < n; ++i) {
            if (failed[i])
                ++log->provider_errors;
            else if (records[i].verdict == Verdict::Unparseable)
                ++log->unparseable;
            log->records.push_back(std::move(records[i]));
        }
    }
    return out;
}

SearchResult two_phase_search(const Table& query, const std::vector<Table>& datalake,
                              const TwoPhaseConfig& cfg, Provider& provider,
                              ClassificationLog* log) {
    Searcher searcher(datalake, Measure::Overlap, nullptr);
    return two_phase_search(query, searcher, cfg, provider, log);
}

// ---------------------------------------------------------------------------
// Results files

void write_results_csv(const fs::path& path, const std::vector<SearchResult>& results) {
    Table t;
    t.header = {"query_table", "candidate_table", "rank", "score", "method"};
    char score_buf[40];
    for (const auto& r : results)
        for (size_t i = 0; i < r.ranked.size(); ++i) {
            std::snprintf(score_buf, sizeof score_buf, "%.9g", r.ranked[i].score);
            t.rows.push_back({r.query, r.ranked[i].name, std::to_string(i + 1), score_buf,
                              r.method});
        }
    write_file_atomic(path, serialize_csv(t));
}

std::vector<SearchResult> read_results_csv(const fs::path& path) {
    Table t = parse_csv(read_file(path));
    const std::vector<std::string> expected = {"query_table", "candidate_table", "rank", "score",
                                               "method"};
    if (t.header != expected)
        throw DataError("unexpected results header in " + path.string());

    struct Row {
        int rank;
        std::string candidate;
        double score;
        std::string method;
    };
    std::map<std::string, std::vector<Row>> by_query;
    for (const auto& row : t.rows) {
        int rank = 0;
        double score = 0.0;
        try {
            rank = std::stoi(row[2]);
            score = std::stod(row[3]);
        } catch (const std::exception&) {
            throw DataError("bad rank/score in " + path.string() + ": " + row[2] + ", " + row[3]);
        }
        if (rank < 1)
            throw DataError("rank must be >= 1 in " + path.string());
        by_query[row[0]].push_back({rank, row[1], score, row[4]});
    }
    std::vector<SearchResult> results;
    for (auto& [query, rows] : by_query) {
        std::stable_sort(rows.begin(), rows.end(),
                         [](const Row& a, const Row& b) { return a.rank < b.rank; });
        SearchResult r;
        r.query = query;
        r.method = rows.empty() ? "" : rows.front().method;
        for (const auto& row : rows)
            r.ranked.push_back({row.candidate, row.score});
        r.k = static_cast<int>(r.ranked.size());
        results.push_back(std::move(r));
    }
    return results;
}

void write_classification_log_csv(const fs::path& path,
                                  const std::vector<ClassificationLog>& logs) {
    Table t;
    t.header = {"query_table", "candidate_table", "phase1_rank", "verdict", "raw"};
    for (const auto& log : logs)
        for (const auto& rec : log.records)
            t.rows.push_back({rec.query, rec.candidate, std::to_string(rec.phase1_rank),
                              std::string(verdict_name(rec.verdict)), rec.raw});
    write_file_atomic(path, serialize_csv(t));
}

}  // namespace unionbench
