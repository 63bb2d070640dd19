#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "unionbench/rng.hpp"
#include "unionbench/table.hpp"

namespace unionbench {

struct SparsityLevel {
    double rate = 0.0;  // fraction of cells to null, in [0, 1]
};

// Returns a copy of t with exactly round(rate * n_cells) empty data cells,
// chosen uniformly without replacement (headers are never touched).
// Already-empty cells count toward the target; if the table is already at
// or past it, the copy is unchanged. The choice is a prefix of one
// rng-drawn cell permutation, so for a fixed rng seed the null set at a
// lower rate is a subset of the null set at any higher rate.
Table inject_nulls(const Table& t, double rate, Rng& rng);

// Builds one sibling directory per level, named
// "<benchmark>_sparsity_<pct>", each with the full layout. Table cells are
// nulled per inject_nulls with a per-table seed derived from (seed,
// relative path) — not the level, which is what makes the levels nested.
// groundtruth.csv and keys.csv are copied byte-identical; at rate 0 table
// files are byte-identical copies too. Returns the created directories.
std::vector<std::filesystem::path> materialize_variants(
    const std::filesystem::path& benchmark_dir, const std::vector<SparsityLevel>& levels,
    uint64_t seed, int jobs = 1);

// "5" for 0.05, "12.5" for 0.125: percent without trailing zeros.
std::string sparsity_percent_label(double rate);

}  // namespace unionbench
