#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "unionbench/benchmark.hpp"
#include "unionbench/errors.hpp"
#include "unionbench/generation.hpp"
#include "unionbench/provider.hpp"
#include "unionbench/rng.hpp"
#include "unionbench/search.hpp"
#include "unionbench/table.hpp"

#include "oracles.hpp"
#include "test_util.hpp"

using namespace unionbench;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> vec(std::initializer_list<const char*> xs) {
    return {xs.begin(), xs.end()};
}

// Table whose column c holds the given value lists (all columns padded to
// the longest).
Table table_from_columns(std::string name,
                         const std::vector<std::vector<std::string>>& columns) {
    Table t;
    t.name = std::move(name);
    size_t rows = 0;
    for (size_t c = 0; c < columns.size(); ++c) {
        t.header.push_back("c" + std::to_string(c));
        rows = std::max(rows, columns[c].size());
    }
    for (size_t r = 0; r < rows; ++r) {
        std::vector<std::string> row;
        for (const auto& col : columns)
            row.push_back(r < col.size() ? col[r] : "");
        t.rows.push_back(std::move(row));
    }
    return t;
}

// Random table over a tiny value pool, tuned to produce partial overlaps.
Table random_pool_table(std::string name, Rng& rng, size_t max_cols = 5) {
    static const std::vector<std::string> pool = {"a", "b", "c", "d", "e", "f"};
    std::vector<std::vector<std::string>> columns(1 + rng.uniform_u64(0, max_cols - 1));
    for (auto& col : columns) {
        size_t n = 1 + rng.uniform_u64(0, 3);
        for (size_t i = 0; i < n; ++i)
            col.push_back(pool[rng.uniform_u64(0, pool.size() - 1)]);
    }
    return table_from_columns(std::move(name), columns);
}

struct FixedAnswerProvider : Provider {
    std::string answer;
    explicit FixedAnswerProvider(std::string a) : answer(std::move(a)) {}
    std::string complete(const CompletionRequest&) override { return answer; }
    std::vector<float> embed(const std::string&) override { return {1.0f}; }
};

struct ThrowingProvider : Provider {
    std::string complete(const CompletionRequest&) override {
        throw ProviderError("synthetic outage");
    }
    std::vector<float> embed(const std::string&) override { return {1.0f}; }
};

}  // namespace

TEST_CASE("value normalization trims, lowercases, and collapses spaces", "[search]") {
    CHECK(normalize_value("  Foo   BAR ") == "foo bar");
    CHECK(normalize_value("a\t b\n\nc") == "a b c");
    CHECK(normalize_value("plain") == "plain");
    CHECK(normalize_value("   ") == "");
    CHECK(normalize_value("") == "");
}

TEST_CASE("column overlap is jaccard over distinct normalized values", "[search]") {
    auto score = [](std::vector<std::string> a, std::vector<std::string> b) {
        return column_unionability(a, b, Measure::Overlap);
    };
    CHECK(score(vec({"x", "y"}), vec({"y", "x"})) == 1.0);
    CHECK(score(vec({"x", "y"}), vec({"p", "q"})) == 0.0);
    CHECK(score(vec({"a", "b", "c"}), vec({"b", "c", "d"})) == 0.5);

    // Duplicates collapse; normalization folds case and spacing.
    CHECK(score(vec({"a", "a", "a", "b"}), vec({"a", "b"})) == 1.0);
    CHECK(score(vec({"  A ", "b c"}), vec({"a", "b   C"})) == 1.0);

    // Symmetry on random inputs.
    Rng rng(31);
    for (int i = 0; i < 50; ++i) {
        Table ta = random_pool_table("a", rng);
        Table tb = random_pool_table("b", rng);
        auto ca = ta.column(0);
        auto cb = tb.column(0);
        CHECK(column_unionability(ca, cb, Measure::Overlap) ==
              column_unionability(cb, ca, Measure::Overlap));
    }

    // Empty columns score zero against everything, including each other.
    CHECK(score({}, vec({"a"})) == 0.0);
    CHECK(score(vec({"", ""}), vec({"a"})) == 0.0);
    CHECK(score({}, {}) == 0.0);

    CHECK_THROWS_AS(column_unionability(vec({"a"}), vec({"a"}), Measure::Embed, nullptr),
                    std::invalid_argument);
}

TEST_CASE("column embedding scores track value similarity", "[search]") {
    StubProvider stub(0);
    auto a = vec({"red planet", "blue planet"});
    auto same = vec({"blue planet", "red planet"});
    auto other = vec({"tax law", "court filing"});

    double self_score = column_unionability(a, same, Measure::Embed, &stub);
    CHECK(self_score > 1.0 - 1e-9);
    CHECK(self_score <= 1.0);

    double cross = column_unionability(a, other, Measure::Embed, &stub);
    CHECK(cross >= 0.0);
    CHECK(cross < self_score);
}

TEST_CASE("table scores divide matched column mass by the wider table", "[search]") {
    Table q = table_from_columns("q", {{"a", "b"}, {"c", "d"}});

    SECTION("a table matches itself perfectly") {
        UnionabilityScore s = table_unionability(q, q, Measure::Overlap);
        CHECK(s.score == 1.0);
        CHECK(s.matched_columns.size() == 2);
    }

    SECTION("disjoint tables score zero with no matches") {
        Table t = table_from_columns("t", {{"x", "y"}, {"z", "w"}});
        UnionabilityScore s = table_unionability(q, t, Measure::Overlap);
        CHECK(s.score == 0.0);
        CHECK(s.matched_columns.empty());
    }

    SECTION("perfect matches against a wider table dilute") {
        Table t = table_from_columns(
            "t", {{"a", "b"}, {"c", "d"}, {"m", "n"}, {"o", "p"}});
        UnionabilityScore s = table_unionability(q, t, Measure::Overlap);
        CHECK(s.score == 0.5);  // 2 matched columns / max(2, 4)
        REQUIRE(s.matched_columns.size() == 2);
        for (const auto& m : s.matched_columns)
            CHECK(m.score == 1.0);
    }
}

TEST_CASE("greedy matching is one-to-one and bounded by the best assignment", "[search]") {
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        Table q = random_pool_table("q", rng);
        Table t = random_pool_table("t", rng);

        std::vector<std::vector<double>> matrix(q.n_cols(),
                                                std::vector<double>(t.n_cols(), 0.0));
        for (size_t qi = 0; qi < q.n_cols(); ++qi)
            for (size_t ti = 0; ti < t.n_cols(); ++ti)
                matrix[qi][ti] =
                    column_unionability(q.column(qi), t.column(ti), Measure::Overlap);

        UnionabilityScore s = table_unionability(q, t, Measure::Overlap);
        double greedy_sum = s.score * static_cast<double>(std::max(q.n_cols(), t.n_cols()));
        CHECK(greedy_sum <= oracle::best_assignment(matrix) + 1e-9);

        std::set<size_t> used_q, used_t;
        for (const auto& m : s.matched_columns) {
            CHECK(m.score > 0.0);
            CHECK(used_q.insert(m.query_col).second);
            CHECK(used_t.insert(m.candidate_col).second);
            CHECK(std::abs(matrix[m.query_col][m.candidate_col] - m.score) < 1e-12);
        }
    }
}

TEST_CASE("the searcher reproduces pairwise table scores", "[search]") {
    Rng rng(13);
    std::vector<Table> lake;
    for (int i = 0; i < 12; ++i)
        lake.push_back(random_pool_table("t" + std::to_string(i), rng));
    Table q = random_pool_table("q", rng);

    for (Measure m : {Measure::Overlap, Measure::Embed}) {
        StubProvider stub(0);
        Provider* embedder = m == Measure::Embed ? &stub : nullptr;
        Searcher searcher(lake, m, embedder);
        SearchResult r = searcher.topk(q, static_cast<int>(lake.size()));
        REQUIRE(r.ranked.size() == lake.size());
        for (const auto& rc : r.ranked) {
            const Table* t = searcher.table(rc.name);
            REQUIRE(t != nullptr);
            UnionabilityScore direct = table_unionability(q, *t, m, embedder);
            CHECK(std::abs(rc.score - direct.score) < 1e-9);
        }
    }
}

TEST_CASE("top-k ranking is deterministic and complete", "[search]") {
    Table q = table_from_columns("q", {{"a", "b"}, {"c", "d"}});
    Table copy = q;
    copy.name = "copy_of_q";
    Table twin_b = table_from_columns("b_twin", {{"a"}, {"zzz"}});
    Table twin_a = twin_b;
    twin_a.name = "a_twin";
    Table unrelated = table_from_columns("unrelated", {{"p"}, {"q"}});
    std::vector<Table> lake = {copy, twin_b, twin_a, unrelated};

    SearchResult r = search_topk(q, lake, 10, Measure::Overlap);
    REQUIRE(r.ranked.size() == 4);  // k exceeds the lake: everything returned
    CHECK(r.ranked[0].name == "copy_of_q");
    CHECK(r.ranked[0].score == 1.0);
    // The twins tie; names break the tie ascending.
    CHECK(r.ranked[1].name == "a_twin");
    CHECK(r.ranked[2].name == "b_twin");
    CHECK(r.ranked[1].score == r.ranked[2].score);
    CHECK(r.method == "overlap");

    // Permuting the datalake changes nothing.
    std::vector<Table> shuffled = {unrelated, twin_a, copy, twin_b};
    SearchResult r2 = search_topk(q, shuffled, 10, Measure::Overlap);
    REQUIRE(r2.ranked.size() == r.ranked.size());
    for (size_t i = 0; i < r.ranked.size(); ++i) {
        CHECK(r2.ranked[i].name == r.ranked[i].name);
        CHECK(r2.ranked[i].score == r.ranked[i].score);
    }

    CHECK(search_topk(q, lake, 2, Measure::Overlap).ranked.size() == 2);
    CHECK_THROWS_AS(search_topk(q, lake, 0, Measure::Overlap), std::invalid_argument);
}

TEST_CASE("embedding search ranks an exact copy first", "[search]") {
    Rng rng(17);
    std::vector<Table> lake;
    for (int i = 0; i < 6; ++i)
        lake.push_back(random_pool_table("t" + std::to_string(i), rng));
    Table q = table_from_columns("q", {{"qq", "rr"}, {"ss", "tt"}});
    Table copy = q;
    copy.name = "the_copy";
    lake.push_back(copy);

    StubProvider stub(0);
    SearchResult r = search_topk(q, lake, 3, Measure::Embed, &stub);
    REQUIRE_FALSE(r.ranked.empty());
    CHECK(r.ranked[0].name == "the_copy");
    CHECK(r.method == "embed");
}

TEST_CASE("icl selection matches a brute-force reference", "[search]") {
    StubProvider stub(0);
    Rng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        size_t pool_size = 1 + rng.uniform_u64(0, 19);
        std::vector<LabeledTablePair> pool;
        for (size_t i = 0; i < pool_size; ++i)
            pool.push_back({random_pool_table("p" + std::to_string(i), rng),
                            random_pool_table("m" + std::to_string(i), rng),
                            rng.uniform_u64(0, 1) == 1});
        std::vector<Table> queries;
        size_t n_queries = 1 + rng.uniform_u64(0, 2);
        for (size_t i = 0; i < n_queries; ++i)
            queries.push_back(random_pool_table("query" + std::to_string(i), rng));
        size_t n = 1 + rng.uniform_u64(0, pool_size - 1);

        // Reference: embed everything, average distances, sort.
        std::vector<std::vector<float>> qe;
        for (const auto& q : queries)
            qe.push_back(stub.embed(serialize_pipe_table(q, 1)));
        struct Ref {
            double distance;
            std::string text;
            bool unionable;
            size_t index;
        };
        std::vector<Ref> refs;
        for (size_t i = 0; i < pool.size(); ++i) {
            std::string text =
                serialize_pipe_table(pool[i].table1, 1) + serialize_pipe_table(pool[i].table2, 1);
            auto e = stub.embed(text);
            double sum = 0.0;
            for (const auto& q : qe)
                sum += oracle::euclidean(e, q);
            refs.push_back({sum / static_cast<double>(qe.size()), text, pool[i].unionable, i});
        }
        std::sort(refs.begin(), refs.end(), [](const Ref& a, const Ref& b) {
            if (a.distance != b.distance)
                return a.distance < b.distance;
            if (a.text != b.text)
                return a.text < b.text;
            return a.unionable < b.unionable;
        });

        auto got = select_icl_examples(queries, "bench-a", pool, "bench-b", n, stub);
        REQUIRE(got.size() == n);
        for (size_t i = 0; i < n; ++i) {
            CHECK(got[i].table1.name == pool[refs[i].index].table1.name);
            CHECK(got[i].unionable == refs[i].unionable);
            CHECK(std::abs(got[i].distance - refs[i].distance) < 1e-12);
            if (i > 0)
                CHECK(got[i - 1].distance <= got[i].distance);
        }
    }
}

TEST_CASE("icl selection is pool-order independent and guards leakage", "[search]") {
    StubProvider stub(0);
    Rng rng(29);
    std::vector<LabeledTablePair> pool;
    for (size_t i = 0; i < 8; ++i)
        pool.push_back({random_pool_table("p" + std::to_string(i), rng),
                        random_pool_table("m" + std::to_string(i), rng), i % 2 == 0});
    std::vector<Table> queries = {random_pool_table("query", rng)};

    auto a = select_icl_examples(queries, "qb", pool, "pb", 4, stub);
    std::vector<LabeledTablePair> reversed(pool.rbegin(), pool.rend());
    auto b = select_icl_examples(queries, "qb", reversed, "pb", 4, stub);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].table1.name == b[i].table1.name);
        CHECK(a[i].distance == b[i].distance);
    }

    CHECK_THROWS_AS(select_icl_examples(queries, "same", pool, "same", 2, stub), LeakageError);
    CHECK_THROWS_AS(select_icl_examples(queries, "qb", {}, "pb", 1, stub),
                    std::invalid_argument);
    CHECK_THROWS_AS(select_icl_examples(queries, "qb", pool, "pb", pool.size() + 1, stub),
                    std::invalid_argument);
}

TEST_CASE("classification prompts stack examples, the pair, and the question", "[search]") {
    Table t1 = testutil::make_table("t1", {"A", "B"},
                                    {{"1", "2"}, {"3", "4"}, {"5", "6"}});
    Table t2 = testutil::make_table("t2", {"A", "C"}, {{"7", "8"}});

    auto count = [](const std::string& s, const std::string& needle) {
        size_t n = 0;
        for (size_t pos = s.find(needle); pos != std::string::npos;
             pos = s.find(needle, pos + needle.size()))
            ++n;
        return n;
    };

    std::string bare = build_classification_prompt(t1, t2, {}, 1);
    CHECK(count(bare, "Unionable:") == 1);
    CHECK(count(bare, "Table 1:") == 1);
    // row_limit 1: header + one data row per table.
    CHECK(bare.find("A | B\n1 | 2\nTable 2:") != std::string::npos);
    std::string question =
        "\nAre the following tables unionable? Answer in the following format:\n"
        "Unionable: {yes/no}";
    REQUIRE(bare.size() >= question.size());
    CHECK(bare.substr(bare.size() - question.size()) == question);

    std::vector<IclExample> examples = {
        {testutil::make_table("e1a", {"X"}, {{"x"}}), testutil::make_table("e1b", {"X"}, {{"x"}}),
         true, 0.0},
        {testutil::make_table("e2a", {"Y"}, {{"y"}}), testutil::make_table("e2b", {"Z"}, {{"z"}}),
         false, 0.0}};
    std::string with = build_classification_prompt(t1, t2, examples, 2);
    CHECK(count(with, "Table 1:") == 3);
    CHECK(count(with, "Table 2:") == 3);
    CHECK(count(with, "Unionable:") == 3);
    CHECK(with.find("Unionable: yes\n\n") != std::string::npos);
    CHECK(with.find("Unionable: no\n\n") != std::string::npos);
    // row_limit 2 keeps two data rows of the three-row target table.
    CHECK(with.find("1 | 2\n3 | 4\nTable 2:") != std::string::npos);

    CHECK_THROWS_AS(build_classification_prompt(t1, t2, {}, 0), std::invalid_argument);
}

TEST_CASE("verdict parsing is case-insensitive and skips the format echo", "[search]") {
    CHECK(parse_verdict("Unionable: yes") == Verdict::Unionable);
    CHECK(parse_verdict("unionable:   YES") == Verdict::Unionable);
    CHECK(parse_verdict("Unionable: NO.") == Verdict::NonUnionable);
    CHECK(parse_verdict("So, UNIONABLE : no") == Verdict::NonUnionable);
    CHECK(parse_verdict("yes") == Verdict::Unionable);
    CHECK(parse_verdict("No, they differ.") == Verdict::NonUnionable);
    CHECK(parse_verdict("the tables look similar") == Verdict::Unparseable);
    CHECK(parse_verdict("") == Verdict::Unparseable);
    CHECK(parse_verdict("maybe unionable") == Verdict::Unparseable);
    // The instruction echo is not an answer; the real answer after it is.
    CHECK(parse_verdict("Unionable: {yes/no}\nUnionable: no") == Verdict::NonUnionable);
    CHECK(parse_verdict("Unionable: {yes/no}") == Verdict::Unparseable);

    CHECK(verdict_name(Verdict::Unionable) == "unionable");
    CHECK(verdict_name(Verdict::NonUnionable) == "non-unionable");
    CHECK(verdict_name(Verdict::Unparseable) == "unparseable");
}

TEST_CASE("classify_pair runs a prompt through the provider", "[search]") {
    StubProvider stub(0);
    Table q = testutil::make_table("q", {"City", "Mayor"}, {{"berlin", "m"}});
    Table shared = testutil::make_table("s", {"city", "Country"}, {{"lyon", "fr"}});
    Table disjoint = testutil::make_table("d", {"Peak", "Height"}, {{"k2", "8611"}});

    CHECK(classify_pair(stub, build_classification_prompt(q, shared, {}, 1)) ==
          Verdict::Unionable);
    CHECK(classify_pair(stub, build_classification_prompt(q, disjoint, {}, 1)) ==
          Verdict::NonUnionable);
}

TEST_CASE("two-phase search reorders by verdict and always completes", "[search]") {
    Rng rng(41);
    std::vector<Table> lake;
    for (int i = 0; i < 10; ++i)
        lake.push_back(random_pool_table("t" + std::to_string(i), rng, 4));
    Table q = random_pool_table("qq", rng, 4);
    Searcher searcher(lake, Measure::Overlap);

    TwoPhaseConfig cfg;
    cfg.k = 3;
    cfg.multiplier = 2;
    SearchResult phase1_k = searcher.topk(q, cfg.k);
    SearchResult phase1_mk = searcher.topk(q, cfg.k * cfg.multiplier);

    SECTION("an always-yes judge keeps the phase-1 ranking") {
        FixedAnswerProvider yes("Unionable: yes");
        ClassificationLog log;
        SearchResult r = two_phase_search(q, searcher, cfg, yes, &log);
        CHECK(r.method == "two-phase");
        REQUIRE(r.ranked.size() == phase1_k.ranked.size());
        for (size_t i = 0; i < r.ranked.size(); ++i) {
            CHECK(r.ranked[i].name == phase1_k.ranked[i].name);
            CHECK(std::abs(r.ranked[i].score - (phase1_k.ranked[i].score + 2.0)) < 1e-12);
        }
        CHECK(log.records.size() == phase1_mk.ranked.size());
        CHECK(log.provider_errors == 0);
        CHECK(log.unparseable == 0);
        for (size_t i = 0; i < log.records.size(); ++i) {
            CHECK(log.records[i].phase1_rank == static_cast<int>(i) + 1);
            CHECK(log.records[i].candidate == phase1_mk.ranked[i].name);
            CHECK(log.records[i].verdict == Verdict::Unionable);
        }
    }

    SECTION("an always-no judge keeps membership via backfill") {
        FixedAnswerProvider no("Unionable: no");
        ClassificationLog log;
        SearchResult r = two_phase_search(q, searcher, cfg, no, &log);
        REQUIRE(r.ranked.size() == phase1_k.ranked.size());
        for (size_t i = 0; i < r.ranked.size(); ++i) {
            CHECK(r.ranked[i].name == phase1_k.ranked[i].name);
            CHECK(r.ranked[i].score == phase1_k.ranked[i].score);  // no acceptance bonus
        }
        for (const auto& rec : log.records)
            CHECK(rec.verdict == Verdict::NonUnionable);
    }

    SECTION("provider failures are tallied, not fatal") {
        ThrowingProvider down;
        ClassificationLog log;
        SearchResult r = two_phase_search(q, searcher, cfg, down, &log);
        REQUIRE(r.ranked.size() == phase1_k.ranked.size());
        for (size_t i = 0; i < r.ranked.size(); ++i)
            CHECK(r.ranked[i].name == phase1_k.ranked[i].name);
        CHECK(log.provider_errors == phase1_mk.ranked.size());
        for (const auto& rec : log.records) {
            CHECK(rec.verdict == Verdict::Unparseable);
            CHECK(rec.raw.empty());
        }
    }

    SECTION("unparseable answers count separately") {
        FixedAnswerProvider vague("hard to say");
        ClassificationLog log;
        two_phase_search(q, searcher, cfg, vague, &log);
        CHECK(log.unparseable == phase1_mk.ranked.size());
        CHECK(log.provider_errors == 0);
    }

    SECTION("the result size is min(k, retrieved candidates)") {
        FixedAnswerProvider yes("Unionable: yes");
        TwoPhaseConfig big = cfg;
        big.k = 100;
        CHECK(two_phase_search(q, searcher, big, yes).ranked.size() == lake.size());

        TwoPhaseConfig one = cfg;
        one.k = 1;
        CHECK(two_phase_search(q, searcher, one, yes).ranked.size() == 1);
    }

    SECTION("the datalake overload behaves like an overlap searcher") {
        FixedAnswerProvider yes("Unionable: yes");
        SearchResult a = two_phase_search(q, searcher, cfg, yes);
        SearchResult b = two_phase_search(q, lake, cfg, yes);
        REQUIRE(a.ranked.size() == b.ranked.size());
        for (size_t i = 0; i < a.ranked.size(); ++i)
            CHECK(a.ranked[i].name == b.ranked[i].name);
    }
}

TEST_CASE("results round-trip through their csv file", "[search]") {
    testutil::TempDir tmp;
    Rng rng(53);
    std::vector<Table> lake;
    for (int i = 0; i < 8; ++i)
        lake.push_back(random_pool_table("table_" + std::to_string(i), rng));

    std::vector<SearchResult> results;
    for (const char* qname : {"qb", "qa"}) {
        Table q = random_pool_table(qname, rng);
        results.push_back(search_topk(q, lake, 5, Measure::Overlap));
    }

    fs::path path = tmp / "results.csv";
    write_results_csv(path, results);
    std::string text = testutil::read_file(path);
    CHECK(text.rfind("query_table,candidate_table,rank,score,method\n", 0) == 0);

    std::vector<SearchResult> back = read_results_csv(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].query == "qa");  // read-back is sorted by query name
    CHECK(back[1].query == "qb");
    for (const auto& r : back) {
        const SearchResult& orig = r.query == results[0].query ? results[0] : results[1];
        REQUIRE(r.ranked.size() == orig.ranked.size());
        CHECK(r.method == orig.method);
        for (size_t i = 0; i < r.ranked.size(); ++i) {
            CHECK(r.ranked[i].name == orig.ranked[i].name);
            CHECK(std::abs(r.ranked[i].score - orig.ranked[i].score) < 1e-8);
        }
    }

    // Row order in the file does not matter; ranks rebuild the ordering.
    std::vector<std::string> lines;
    {
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line))
            lines.push_back(line);
    }
    std::reverse(lines.begin() + 1, lines.end());
    {
        std::ofstream out(tmp / "shuffled.csv");
        for (const auto& line : lines)
            out << line << "\n";
    }
    std::vector<SearchResult> reordered = read_results_csv(tmp / "shuffled.csv");
    REQUIRE(reordered.size() == back.size());
    for (size_t i = 0; i < back.size(); ++i) {
        REQUIRE(reordered[i].ranked.size() == back[i].ranked.size());
        for (size_t j = 0; j < back[i].ranked.size(); ++j)
            CHECK(reordered[i].ranked[j].name == back[i].ranked[j].name);
    }
}

TEST_CASE("results files are validated on read", "[search]") {
    testutil::TempDir tmp;

    {
        std::ofstream out(tmp / "bad_header.csv");
        out << "query,candidate,rank,score,method\nq,c,1,0.5,overlap\n";
    }
    CHECK_THROWS_AS(read_results_csv(tmp / "bad_header.csv"), DataError);

    {
        std::ofstream out(tmp / "bad_rank.csv");
        out << "query_table,candidate_table,rank,score,method\nq,c,0,0.5,overlap\n";
    }
    CHECK_THROWS_AS(read_results_csv(tmp / "bad_rank.csv"), DataError);

    {
        std::ofstream out(tmp / "bad_score.csv");
        out << "query_table,candidate_table,rank,score,method\nq,c,1,not-a-number,overlap\n";
    }
    CHECK_THROWS_AS(read_results_csv(tmp / "bad_score.csv"), DataError);
}

TEST_CASE("classification logs serialize with their verdicts", "[search]") {
    testutil::TempDir tmp;
    ClassificationLog log;
    log.records.push_back({"q.csv", "c1.csv", 1, Verdict::Unionable, "Unionable: yes"});
    log.records.push_back({"q.csv", "c2.csv", 2, Verdict::Unparseable, "odd, text\nwith lines"});

    fs::path path = tmp / "log.csv";
    write_classification_log_csv(path, {log});
    Table t = parse_csv(testutil::read_file(path));
    CHECK(t.header == std::vector<std::string>{"query_table", "candidate_table", "phase1_rank",
                                               "verdict", "raw"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0][3] == "unionable");
    CHECK(t.rows[1][3] == "unparseable");
    CHECK(t.rows[1][4] == "odd, text\nwith lines");  // csv quoting survives
}

TEST_CASE("measure names round-trip", "[search]") {
    CHECK(measure_name(Measure::Overlap) == "overlap");
    CHECK(measure_name(Measure::Embed) == "embed");
    CHECK(measure_from_name("overlap") == Measure::Overlap);
    CHECK(measure_from_name("embed") == Measure::Embed);
    CHECK_THROWS_AS(measure_from_name("cosine"), std::invalid_argument);
}
