#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "unionbench/table.hpp"

namespace unionbench {

enum class UniquenessBucket { Sparsely, Moderately, Densely };

std::string_view uniqueness_bucket_name(UniquenessBucket b);

// Per-column statistics. uniqueness = distinct non-null / non-null (0 when
// the column is all null); buckets are [0, 0.10) sparsely, [0.10, 0.50)
// moderately, [0.50, 1] densely.
struct ColumnStats {
    ColumnType type = ColumnType::ShortString;
    double density = 1.0;      // non-null / total
    double uniqueness = 0.0;
    double mean_words = 0.0;   // over non-null values
    UniquenessBucket bucket = UniquenessBucket::Sparsely;
};

// When null_literals is set, values spelled "null", "na", "n/a", "none",
// "nan" or "-" (case-insensitive, trimmed) are treated as nulls alongside
// the empty string.
ColumnStats profile_column(std::span<const std::string> values, bool null_literals = false);

// Aggregates for one side (query or datalake) of a benchmark.
struct SideStats {
    size_t tables = 0;
    double avg_rows = 0.0;
    double avg_cols = 0.0;
    uintmax_t bytes = 0;          // on-disk CSV bytes
    size_t columns = 0;
    size_t short_str = 0, medium_str = 0, long_str = 0, numeric = 0;
    size_t sparsely = 0, moderately = 0, densely = 0;
    double avg_density = 0.0;     // mean of column densities
    double avg_words = 0.0;       // mean of column mean-words
};

struct BenchmarkProfile {
    std::string source;  // directory path, used to label reports
    size_t n_tables = 0;
    SideStats query;
    SideStats datalake;
    size_t unionable_pairs = 0;
    size_t non_unionable_pairs = 0;
};

// Profiles a benchmark directory (LayoutError when the layout is missing
// pieces). Results do not depend on file enumeration order.
BenchmarkProfile profile_benchmark(const std::filesystem::path& dir,
                                   bool null_literals = false);

std::string profile_to_json(const BenchmarkProfile& p);
std::string profile_to_text(const BenchmarkProfile& p);

// Side-by-side comparison of two or more profiles with numeric deltas
// against the first; throws std::invalid_argument on fewer than two.
std::string compare_to_json(const std::vector<BenchmarkProfile>& profiles);
std::string compare_to_text(const std::vector<BenchmarkProfile>& profiles);

}  // namespace unionbench
