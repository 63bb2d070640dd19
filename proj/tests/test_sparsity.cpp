#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "unionbench/benchmark.hpp"
#include "unionbench/errors.hpp"
#include "unionbench/generation.hpp"
#include "unionbench/provider.hpp"
#include "unionbench/rng.hpp"
#include "unionbench/sparsity.hpp"
#include "unionbench/table.hpp"

#include "test_util.hpp"

using namespace unionbench;
namespace fs = std::filesystem;

namespace {

Table dense_table(size_t rows, size_t cols) {
    Table t;
    t.name = "dense";
    for (size_t c = 0; c < cols; ++c)
        t.header.push_back("h" + std::to_string(c));
    for (size_t r = 0; r < rows; ++r) {
        std::vector<std::string> row;
        for (size_t c = 0; c < cols; ++c)
            row.push_back("v" + std::to_string(r) + "_" + std::to_string(c));
        t.rows.push_back(std::move(row));
    }
    return t;
}

size_t count_empty(const Table& t) {
    size_t n = 0;
    for (const auto& row : t.rows)
        for (const auto& cell : row)
            if (cell.empty())
                ++n;
    return n;
}

std::set<std::pair<size_t, size_t>> empty_positions(const Table& t) {
    std::set<std::pair<size_t, size_t>> pos;
    for (size_t r = 0; r < t.rows.size(); ++r)
        for (size_t c = 0; c < t.rows[r].size(); ++c)
            if (t.rows[r][c].empty())
                pos.insert({r, c});
    return pos;
}

bool subset_of(const std::set<std::pair<size_t, size_t>>& a,
               const std::set<std::pair<size_t, size_t>>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

TEST_CASE("null injection hits the target count exactly", "[sparsity]") {
    Table t = dense_table(10, 10);
    Rng rng(5);
    Table out = inject_nulls(t, 0.2, rng);
    CHECK(count_empty(out) == 20);
    CHECK(out.header == t.header);
    CHECK(out.rows.size() == t.rows.size());

    // Cells that survived are untouched.
    for (size_t r = 0; r < out.rows.size(); ++r)
        for (size_t c = 0; c < out.rows[r].size(); ++c)
            if (!out.rows[r][c].empty())
                CHECK(out.rows[r][c] == t.rows[r][c]);
}

TEST_CASE("null injection edge rates", "[sparsity]") {
    Table t = dense_table(6, 5);

    SECTION("rate 0 is the identity") {
        Rng rng(1);
        CHECK(inject_nulls(t, 0.0, rng) == t);
    }

    SECTION("rate 1 empties every data cell but never the header") {
        Rng rng(1);
        Table out = inject_nulls(t, 1.0, rng);
        CHECK(count_empty(out) == 30);
        CHECK(out.header == t.header);
    }

    SECTION("rates outside [0, 1] are rejected") {
        Rng rng(1);
        CHECK_THROWS_AS(inject_nulls(t, -0.1, rng), std::invalid_argument);
        CHECK_THROWS_AS(inject_nulls(t, 1.01, rng), std::invalid_argument);
    }

    SECTION("fractional targets round") {
        Rng rng(1);
        // 30 cells * 0.333 = 9.99 -> 10
        CHECK(count_empty(inject_nulls(t, 0.333, rng)) == 10);
    }
}

TEST_CASE("null injection is deterministic in the rng seed", "[sparsity]") {
    Table t = dense_table(8, 7);
    Rng a(77), b(77), c(78);
    Table out_a = inject_nulls(t, 0.25, a);
    Table out_b = inject_nulls(t, 0.25, b);
    Table out_c = inject_nulls(t, 0.25, c);
    CHECK(out_a == out_b);
    CHECK(empty_positions(out_a) != empty_positions(out_c));
}

TEST_CASE("existing empties count toward the target", "[sparsity]") {
    Table t = dense_table(10, 10);
    for (size_t r = 0; r < 3; ++r)
        for (size_t c = 0; c < 10; ++c)
            t.rows[r][c].clear();  // 30 pre-existing empties

    Rng rng(9);
    CHECK(inject_nulls(t, 0.2, rng) == t);  // target 20 already exceeded

    Rng rng2(9);
    Table out = inject_nulls(t, 0.5, rng2);
    CHECK(count_empty(out) == 50);
    CHECK(subset_of(empty_positions(t), empty_positions(out)));
}

TEST_CASE("lower rates produce nested null sets under one seed", "[sparsity]") {
    Table t = dense_table(10, 10);
    std::set<std::pair<size_t, size_t>> prev;
    for (double rate : {0.05, 0.10, 0.15, 0.20}) {
        Rng rng(123);  // same stream for every rate
        auto pos = empty_positions(inject_nulls(t, rate, rng));
        CHECK(pos.size() == static_cast<size_t>(std::llround(rate * 100)));
        CHECK(subset_of(prev, pos));
        prev = pos;
    }
}

TEST_CASE("percent labels drop trailing zeros", "[sparsity]") {
    CHECK(sparsity_percent_label(0.0) == "0");
    CHECK(sparsity_percent_label(0.05) == "5");
    CHECK(sparsity_percent_label(0.125) == "12.5");
    CHECK(sparsity_percent_label(0.2) == "20");
}

TEST_CASE("sparsity variants materialize as sibling directories", "[sparsity]") {
    testutil::TempDir tmp;
    GenConfig cfg;
    cfg.topics = {"Astronomy", "Ecology"};
    cfg.pairs_per_topic = 3;
    cfg.unionable_ratio = 0.5;
    cfg.seed = 42;
    StubProvider provider(0);
    generate_benchmark(cfg, provider, tmp / "bench");

    std::vector<SparsityLevel> levels = {{0.0}, {0.05}, {0.10}, {0.20}};
    auto dirs = materialize_variants(tmp / "bench", levels, 7);
    REQUIRE(dirs.size() == 4);
    CHECK(dirs[0].filename() == "bench_sparsity_0");
    CHECK(dirs[1].filename() == "bench_sparsity_5");
    CHECK(dirs[2].filename() == "bench_sparsity_10");
    CHECK(dirs[3].filename() == "bench_sparsity_20");

    for (const auto& dir : dirs) {
        Benchmark b = load_benchmark(dir);  // full layout present and valid
        CHECK(b.queries.size() == 2);
        CHECK(b.datalake.size() == 6);
        CHECK(b.groundtruth.size() == 6);

        // Labels and keys are carried over byte-identical.
        CHECK(testutil::read_file(dir / "groundtruth.csv") ==
              testutil::read_file(tmp / "bench" / "groundtruth.csv"));
        CHECK(testutil::read_file(dir / "keys.csv") ==
              testutil::read_file(tmp / "bench" / "keys.csv"));

        auto manifest = testutil::read_file(dir / "manifest.json");
        CHECK(manifest.find("\"sparsity\"") != std::string::npos);
        CHECK(manifest.find("\"source\": \"bench\"") != std::string::npos);
    }

    // Rate 0 tables are byte-for-byte copies of the source.
    for (const char* side : {"query", "datalake"})
        for (const auto& entry : fs::directory_iterator(tmp / "bench" / side)) {
            if (entry.path().extension() != ".csv")
                continue;
            fs::path rel = fs::path(side) / entry.path().filename();
            CHECK(testutil::read_file(dirs[0] / rel) == testutil::read_file(entry.path()));
        }
}

TEST_CASE("variant tables hit their per-table null targets and nest", "[sparsity]") {
    testutil::TempDir tmp;
    GenConfig cfg;
    cfg.topics = {"Gardening"};
    cfg.pairs_per_topic = 4;
    cfg.unionable_ratio = 0.5;
    cfg.seed = 11;
    StubProvider provider(0);
    generate_benchmark(cfg, provider, tmp / "bench");

    std::vector<SparsityLevel> levels = {{0.05}, {0.10}, {0.20}};
    auto dirs = materialize_variants(tmp / "bench", levels, 7);

    for (const char* side : {"query", "datalake"})
        for (const auto& entry : fs::directory_iterator(tmp / "bench" / side)) {
            if (entry.path().extension() != ".csv")
                continue;
            fs::path rel = fs::path(side) / entry.path().filename();
            Table orig = parse_csv(testutil::read_file(entry.path()));
            std::set<std::pair<size_t, size_t>> prev;
            for (size_t i = 0; i < levels.size(); ++i) {
                Table variant = parse_csv(testutil::read_file(dirs[i] / rel));
                size_t want = static_cast<size_t>(
                    std::llround(levels[i].rate * static_cast<double>(orig.n_cells())));
                CHECK(count_empty(variant) == want);
                auto pos = empty_positions(variant);
                CHECK(subset_of(prev, pos));  // same permutation at every level
                prev = pos;
            }
        }
}

TEST_CASE("sparsity materialization is reproducible", "[sparsity]") {
    testutil::TempDir tmp;
    GenConfig cfg;
    cfg.topics = {"Law"};
    cfg.pairs_per_topic = 2;
    cfg.seed = 3;
    StubProvider provider(0);
    generate_benchmark(cfg, provider, tmp / "a" / "bench");
    generate_benchmark(cfg, provider, tmp / "b" / "bench");

    std::vector<SparsityLevel> levels = {{0.10}};
    auto d1 = materialize_variants(tmp / "a" / "bench", levels, 7);
    auto d2 = materialize_variants(tmp / "b" / "bench", levels, 7);
    CHECK(testutil::dir_fingerprint(d1[0]) == testutil::dir_fingerprint(d2[0]));

    auto d3 = materialize_variants(tmp / "b" / "bench", {{0.10}}, 8);
    // Different seed, same directory name: the rerun overwrote the variant
    // with differently placed nulls.
    CHECK(testutil::dir_fingerprint(d3[0]) != testutil::dir_fingerprint(d1[0]));
}

TEST_CASE("sparsity rejects bad inputs", "[sparsity]") {
    testutil::TempDir tmp;
    fs::create_directories(tmp / "not_bench");
    CHECK_THROWS_AS(materialize_variants(tmp / "not_bench", {{0.1}}, 1), LayoutError);

    GenConfig cfg;
    cfg.topics = {"Law"};
    cfg.pairs_per_topic = 1;
    StubProvider provider(0);
    generate_benchmark(cfg, provider, tmp / "bench");
    CHECK_THROWS_AS(materialize_variants(tmp / "bench", {}, 1), std::invalid_argument);
    CHECK_THROWS_AS(materialize_variants(tmp / "bench", {{1.5}}, 1), std::invalid_argument);
}
