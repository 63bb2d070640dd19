#include "unionbench/sparsity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

#include "unionbench/benchmark.hpp"
#include "unionbench/errors.hpp"
#include "unionbench/parallel.hpp"

namespace unionbench {

namespace fs = std::filesystem;

Table inject_nulls(const Table& t, double rate, Rng& rng) {
    if (rate < 0.0 || rate > 1.0)
        throw std::invalid_argument("sparsity rate must be in [0, 1]");
    size_t cells = t.n_cells();
    size_t target = static_cast<size_t>(std::llround(rate * static_cast<double>(cells)));

    // The permutation is always drawn, even when no cell changes, so that
    // one rng stream yields the same ordering at every rate.
    std::vector<size_t> order(cells);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);

    Table out = t;
    size_t empty = 0;
    for (const auto& row : out.rows)
        for (const auto& cell : row)
            if (cell.empty())
                ++empty;
    for (size_t idx : order) {
        if (empty >= target)
            break;
        std::string& cell = out.rows[idx / t.n_cols()][idx % t.n_cols()];
        if (!cell.empty()) {
            cell.clear();
            ++empty;
        }
    }
    return out;
}

std::string sparsity_percent_label(double rate) {
    double pct = rate * 100.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", pct);
    return buf;
}

std::vector<fs::path> materialize_variants(const fs::path& benchmark_dir,
                                           const std::vector<SparsityLevel>& levels,
                                           uint64_t seed, int jobs) {
    if (levels.empty())
        throw std::invalid_argument("no sparsity levels given");
    for (const auto& level : levels)
        if (level.rate < 0.0 || level.rate > 1.0)
            throw std::invalid_argument("sparsity rate must be in [0, 1]");
    if (!fs::is_directory(benchmark_dir / "query") ||
        !fs::is_directory(benchmark_dir / "datalake"))
        throw LayoutError("not a benchmark directory: " + benchmark_dir.string());

    // Collect table files as relative paths; they key the per-table seeds.
    std::vector<fs::path> rel_files;
    for (const char* side : {"query", "datalake"})
        for (const auto& entry : fs::directory_iterator(benchmark_dir / side))
            if (entry.is_regular_file() && entry.path().extension() == ".csv")
                rel_files.push_back(fs::path(side) / entry.path().filename());
    std::sort(rel_files.begin(), rel_files.end());

    // Normalize away a trailing slash so the suffix lands on the name.
    fs::path base = benchmark_dir.lexically_normal();
    if (base.filename().empty() || base.filename() == ".")
        base = base.parent_path();

    std::vector<fs::path> created;
    for (const auto& level : levels) {
        fs::path out_dir = base;
        out_dir += "_sparsity_" + sparsity_percent_label(level.rate);
        std::error_code ec;
        fs::create_directories(out_dir / "query", ec);
        fs::create_directories(out_dir / "datalake", ec);
        if (!fs::is_directory(out_dir / "query") || !fs::is_directory(out_dir / "datalake"))
            throw IoError("cannot create " + out_dir.string());

        parallel_for(rel_files.size(), jobs, [&](size_t i) {
            const fs::path& rel = rel_files[i];
            fs::path src = benchmark_dir / rel;
            fs::path dst = out_dir / rel;
            if (level.rate == 0.0) {
                // exact copy, bytes included
                write_file_atomic(dst, read_file(src));
                return;
            }
            Table t = parse_csv(read_file(src));
            // Seed from the relative path only: the same table gets the
            // same cell permutation at every level.
            Rng rng(mix(mix(seed, "sparsity"), rel.generic_string()));
            write_file_atomic(dst, serialize_csv(inject_nulls(t, level.rate, rng)));
        });

        for (const char* extra : {"groundtruth.csv", "keys.csv"})
            if (fs::is_regular_file(benchmark_dir / extra))
                write_file_atomic(out_dir / extra, read_file(benchmark_dir / extra));

        // Variant manifest: the source manifest (if any) plus the variant
        // parameters. Deterministic, like everything else written here.
        nlohmann::json manifest;
        if (fs::is_regular_file(benchmark_dir / "manifest.json")) {
            manifest = nlohmann::json::parse(read_file(benchmark_dir / "manifest.json"),
                                             nullptr, false);
            if (manifest.is_discarded())
                manifest = nlohmann::json::object();
        }
        manifest["sparsity"] = {{"rate", level.rate},
                                {"seed", seed},
                                {"source", benchmark_dir.filename().string()}};
        write_file_atomic(out_dir / "manifest.json", manifest.dump(2) + "\n");
        created.push_back(out_dir);
    }
    return created;
}

}  // namespace unionbench
