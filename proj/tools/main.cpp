#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "unionbench/benchmark.hpp"
#include "unionbench/errors.hpp"
#include "unionbench/eval.hpp"
#include "unionbench/generation.hpp"
#include "unionbench/parallel.hpp"
#include "unionbench/profiler.hpp"
#include "unionbench/provider.hpp"
#include "unionbench/search.hpp"
#include "unionbench/sparsity.hpp"

namespace fs = std::filesystem;
using namespace unionbench;

namespace {

int default_jobs() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

// Options shared by every subcommand that may talk to a provider. The API
// key itself is only ever read from the named environment variable inside
// the provider; it never appears in options, logs, or manifests.
struct ProviderOpts {
    std::string provider = "stub";
    std::string endpoint;
    std::string model;
    std::string api_key_env = "UNIONBENCH_API_KEY";
    double timeout = 30.0;
    int retries = 3;
    int max_concurrency = 4;
    int token_limit = 4096;
};

void add_provider_options(CLI::App* cmd, ProviderOpts& o) {
    cmd->add_option("--provider", o.provider, "completion/embedding backend")
        ->check(CLI::IsMember({"stub", "remote"}))
        ->capture_default_str();
    cmd->add_option("--endpoint", o.endpoint, "remote API base URL")
        ->envname("UNIONBENCH_ENDPOINT");
    cmd->add_option("--model", o.model, "remote model name")->envname("UNIONBENCH_MODEL");
    cmd->add_option("--api-key-env", o.api_key_env,
                    "name of the environment variable holding the API key")
        ->capture_default_str();
    cmd->add_option("--timeout", o.timeout, "remote request timeout, seconds")
        ->capture_default_str();
    cmd->add_option("--retries", o.retries, "remote retry count for transient failures")
        ->capture_default_str();
    cmd->add_option("--max-concurrency", o.max_concurrency, "in-flight remote request cap")
        ->capture_default_str();
    cmd->add_option("--token-limit", o.token_limit, "remote per-request token ceiling")
        ->capture_default_str();
}

std::unique_ptr<Provider> build_provider(const ProviderOpts& o, uint64_t seed) {
    if (o.provider == "stub")
        return std::make_unique<StubProvider>(seed);
    ProviderConfig cfg;
    cfg.kind = ProviderKind::Remote;
    cfg.endpoint = o.endpoint;
    cfg.model = o.model;
    cfg.api_key_env = o.api_key_env;
    cfg.timeout_seconds = o.timeout;
    cfg.retries = o.retries;
    cfg.max_concurrency = o.max_concurrency;
    cfg.token_limit = o.token_limit;
    return make_provider(cfg);
}

// Manifest label for the backend. Models are fine to record; endpoints are
// not (URLs can embed credentials).
std::string provider_label(const ProviderOpts& o) {
    if (o.provider == "stub")
        return "stub";
    return o.model.empty() ? "remote" : "remote:" + o.model;
}

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i)
            s += ' ';
        s += argv[i];
    }
    return s;
}

// Folds the invocation into the benchmark manifest after a successful run.
// Deliberately no wall-clock fields: reruns of the same command must be
// byte-identical.
void record_run(const fs::path& manifest_path, const std::string& command) {
    nlohmann::json j = nlohmann::json::parse(read_file(manifest_path));
    j["run"] = {{"command", command}};
    write_file_atomic(manifest_path, j.dump(2) + "\n");
}

int cmd_generate(const std::string& command, const ProviderOpts& popts,
                 const std::string& topics_file, const std::string& out_dir, GenConfig cfg,
                 bool quiet) {
    cfg.topics = read_topics_file(topics_file);
    auto provider = build_provider(popts, cfg.seed);
    GenerationSummary summary = generate_benchmark(cfg, *provider, out_dir,
                                                   provider_label(popts));
    record_run(fs::path(out_dir) / "manifest.json", command);

    if (!quiet) {
        std::cout << "wrote " << summary.tables_written << " tables, " << summary.pairs_labeled
                  << " labeled pairs (" << summary.unionable << " unionable, "
                  << summary.non_unionable << " non-unionable) to " << out_dir << "\n";
        if (!summary.warnings.empty())
            std::cout << summary.warnings.size() << " warning(s); see manifest.json\n";
    }

    if (summary.skipped_pairs.empty() && summary.dropped_topics.empty())
        return 0;

    // Partial failure: leave a resume log next to the output and fail the
    // run so scripts notice.
    std::string log;
    for (const auto& t : summary.dropped_topics)
        log += "dropped-topic " + t + "\n";
    for (const auto& p : summary.skipped_pairs)
        log += "skipped-pair " + p + "\n";
    write_file_atomic(fs::path(out_dir) / "resume.log", log);
    std::cerr << "generation incomplete:\n" << log;
    std::cerr << "details recorded in " << (fs::path(out_dir) / "resume.log").string() << "\n";
    return 3;
}

int cmd_sparsify(const std::string& in_dir, const std::vector<double>& percents, uint64_t seed,
                 int jobs) {
    std::vector<SparsityLevel> levels;
    for (double pct : percents) {
        if (pct < 0.0 || pct > 100.0)
            throw std::invalid_argument("sparsity percent out of range: " +
                                        std::to_string(pct));
        levels.push_back({pct / 100.0});
    }
    auto dirs = materialize_variants(in_dir, levels, seed, jobs);
    for (const auto& d : dirs)
        std::cout << d.string() << "\n";
    return 0;
}

int cmd_profile(const std::vector<std::string>& dirs, const std::string& format,
                bool null_literals, const std::string& out_file) {
    std::vector<BenchmarkProfile> profiles;
    for (const auto& d : dirs)
        profiles.push_back(profile_benchmark(d, null_literals));
    std::string text;
    if (profiles.size() == 1)
        text = format == "json" ? profile_to_json(profiles[0]) : profile_to_text(profiles[0]);
    else
        text = format == "json" ? compare_to_json(profiles) : compare_to_text(profiles);
    if (out_file.empty())
        std::cout << text;
    else
        write_file_atomic(out_file, text);
    return 0;
}

struct SearchOpts {
    std::string benchmark_dir;
    std::string method = "overlap";
    int k = 10;
    int multiplier = 2;
    std::string out_file;
    std::string icl_dir;
    int icl_n = 0;
    int row_limit = 1;
    int max_tokens = 16;
    double temperature = 0.0;
    uint64_t seed = 0;
    int jobs = 1;
    std::string classification_log;
};

int cmd_search(const ProviderOpts& popts, const SearchOpts& o) {
    Benchmark bench = load_benchmark(o.benchmark_dir);
    if (bench.queries.empty())
        throw DataError("benchmark has no query tables: " + o.benchmark_dir);
    std::unique_ptr<Provider> provider;
    bool needs_provider = o.method != "overlap" || o.icl_n > 0;
    if (needs_provider)
        provider = build_provider(popts, o.seed);

    std::vector<SearchResult> results(bench.queries.size());
    std::vector<ClassificationLog> logs;

    if (o.method == "two-phase") {
        std::vector<IclExample> examples;
        if (o.icl_n > 0) {
            if (o.icl_dir.empty())
                throw std::invalid_argument("--icl-n requires --icl-benchmark");
            Benchmark pool_bench = load_benchmark(o.icl_dir);
            auto pool = icl_pool_from_benchmark(pool_bench);
            examples = select_icl_examples(bench.queries, bench.id(), pool, pool_bench.id(),
                                           static_cast<size_t>(o.icl_n), *provider);
        }
        Searcher phase1(bench.datalake, Measure::Overlap, nullptr);
        TwoPhaseConfig cfg;
        cfg.k = o.k;
        cfg.multiplier = o.multiplier;
        cfg.examples = std::move(examples);
        cfg.row_limit = static_cast<size_t>(o.row_limit);
        cfg.max_tokens = o.max_tokens;
        cfg.temperature = o.temperature;
        cfg.seed = o.seed;
        cfg.jobs = o.jobs;
        logs.resize(bench.queries.size());
        for (size_t i = 0; i < bench.queries.size(); ++i)
            results[i] = two_phase_search(bench.queries[i], phase1, cfg, *provider, &logs[i]);
    } else {
        if (o.icl_n > 0 || !o.icl_dir.empty())
            throw std::invalid_argument("in-context examples only apply to --method two-phase");
        Measure measure = measure_from_name(o.method);
        Searcher searcher(bench.datalake, measure, provider.get());
        parallel_for(bench.queries.size(), o.jobs,
                     [&](size_t i) { results[i] = searcher.topk(bench.queries[i], o.k); });
    }

    write_results_csv(o.out_file, results);
    if (!o.classification_log.empty()) {
        if (o.method != "two-phase")
            throw std::invalid_argument("--classification-log only applies to two-phase");
        write_classification_log_csv(o.classification_log, logs);
    }

    size_t rows = 0, unparseable = 0, provider_errors = 0;
    for (const auto& r : results)
        rows += r.ranked.size();
    for (const auto& l : logs) {
        unparseable += l.unparseable;
        provider_errors += l.provider_errors;
    }
    std::cout << "ranked " << rows << " candidates for " << results.size() << " queries ("
              << o.method << ", k=" << o.k << ") -> " << o.out_file << "\n";
    if (unparseable || provider_errors)
        std::cerr << "warning: " << unparseable << " unparseable verdicts, " << provider_errors
                  << " provider failures treated as rejections\n";
    return 0;
}

int cmd_evaluate(const std::string& results_file, const std::string& benchmark_dir,
                 const std::vector<int>& ks, const std::string& variant_name,
                 const std::string& format, const std::string& report_file) {
    std::vector<SearchResult> results = read_results_csv(results_file);
    Benchmark bench = load_benchmark(benchmark_dir);
    MapVariant variant = map_variant_from_name(variant_name);
    EvalReport report = evaluate(results, bench, ks, variant);
    std::cout << (format == "json" ? report_to_json(report) : report_to_text(report));
    if (!report_file.empty())
        write_file_atomic(report_file, report_to_json(report));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"benchmark generation and evaluation toolchain for table union search"};
    app.set_version_flag("--version", UNIONBENCH_VERSION);
    app.require_subcommand(1);
    std::string command = join_args(argc, argv);
    int rc = 0;

    // generate
    auto popts_gen = std::make_shared<ProviderOpts>();
    auto gen_topics = std::make_shared<std::string>("data/topics.txt");
    auto gen_out = std::make_shared<std::string>();
    auto gen_cfg = std::make_shared<GenConfig>();
    auto gen_quiet = std::make_shared<bool>(false);
    gen_cfg->jobs = default_jobs();
    CLI::App* generate = app.add_subcommand(
        "generate", "generate a labeled benchmark of query and datalake tables");
    generate->add_option("--topics", *gen_topics, "topics file, one topic per line")
        ->capture_default_str();
    generate->add_option("--pairs-per-topic", gen_cfg->pairs_per_topic, "table pairs per topic")
        ->capture_default_str();
    generate
        ->add_option("--unionable-ratio", gen_cfg->unionable_ratio,
                     "fraction of each topic's pairs labeled unionable")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    generate->add_option("--seed", gen_cfg->seed, "RNG seed")->capture_default_str();
    generate->add_option("--out", *gen_out, "output benchmark directory")->required();
    generate->add_option("--rows-min", gen_cfg->rows_min)->capture_default_str();
    generate->add_option("--rows-max", gen_cfg->rows_max)->capture_default_str();
    generate->add_option("--cols-min", gen_cfg->cols_min)->capture_default_str();
    generate->add_option("--cols-max", gen_cfg->cols_max)->capture_default_str();
    generate->add_option("--textuality-min", gen_cfg->textuality_min, "min words per value")
        ->capture_default_str();
    generate->add_option("--textuality-max", gen_cfg->textuality_max, "max words per value")
        ->capture_default_str();
    generate->add_option("--jobs", gen_cfg->jobs, "parallel pair generations")
        ->capture_default_str();
    generate->add_option("--max-tokens", gen_cfg->max_tokens, "completion budget per pair")
        ->capture_default_str();
    generate->add_option("--temperature", gen_cfg->temperature)->capture_default_str();
    generate->add_flag("--quiet", *gen_quiet, "suppress the summary line");
    add_provider_options(generate, *popts_gen);
    generate->callback([=, &rc, &command] {
        rc = cmd_generate(command, *popts_gen, *gen_topics, *gen_out, *gen_cfg, *gen_quiet);
    });

    // sparsify
    auto sp_in = std::make_shared<std::string>();
    auto sp_levels = std::make_shared<std::vector<double>>(
        std::vector<double>{0, 5, 10, 15, 20});
    auto sp_seed = std::make_shared<uint64_t>(0);
    auto sp_jobs = std::make_shared<int>(default_jobs());
    CLI::App* sparsify = app.add_subcommand(
        "sparsify", "materialize null-injected sibling copies of a benchmark");
    sparsify->add_option("--in", *sp_in, "source benchmark directory")->required();
    sparsify
        ->add_option("--levels", *sp_levels,
                     "comma-separated sparsity percentages, e.g. 0,5,10,15,20")
        ->delimiter(',')
        ->capture_default_str();
    sparsify->add_option("--seed", *sp_seed, "RNG seed")->capture_default_str();
    sparsify->add_option("--jobs", *sp_jobs, "parallel table rewrites")->capture_default_str();
    sparsify->callback([=, &rc] { rc = cmd_sparsify(*sp_in, *sp_levels, *sp_seed, *sp_jobs); });

    // profile
    auto pf_dirs = std::make_shared<std::vector<std::string>>();
    auto pf_format = std::make_shared<std::string>("text");
    auto pf_nulls = std::make_shared<bool>(false);
    auto pf_out = std::make_shared<std::string>();
    CLI::App* profile = app.add_subcommand(
        "profile", "summarize benchmark shape, types, density and uniqueness");
    profile->add_option("--benchmark", *pf_dirs,
                        "benchmark directory; repeat to compare several")
        ->required();
    profile->add_option("--format", *pf_format, "output format")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();
    profile->add_flag("--null-literals", *pf_nulls,
                      "also treat null/na/n:a/none/nan/- spellings as nulls");
    profile->add_option("--out", *pf_out, "write the report here instead of stdout");
    profile->callback([=, &rc] { rc = cmd_profile(*pf_dirs, *pf_format, *pf_nulls, *pf_out); });

    // search
    auto popts_search = std::make_shared<ProviderOpts>();
    auto so = std::make_shared<SearchOpts>();
    so->jobs = default_jobs();
    CLI::App* search = app.add_subcommand(
        "search", "rank datalake tables by unionability with each query table");
    search->add_option("--benchmark", so->benchmark_dir, "benchmark directory")->required();
    search->add_option("--method", so->method, "ranking method")
        ->check(CLI::IsMember({"overlap", "embed", "two-phase"}))
        ->capture_default_str();
    search->add_option("--k", so->k, "results per query")->capture_default_str();
    search
        ->add_option("--multiplier", so->multiplier,
                     "two-phase: retrieve multiplier*k candidates before classification")
        ->capture_default_str();
    search->add_option("--out", so->out_file, "results CSV path")->required();
    search->add_option("--icl-benchmark", so->icl_dir,
                       "benchmark to draw labeled in-context examples from (two-phase)");
    search->add_option("--icl-n", so->icl_n, "number of in-context examples")
        ->capture_default_str();
    search->add_option("--row-limit", so->row_limit, "rows per table in prompts")
        ->capture_default_str();
    search->add_option("--max-tokens", so->max_tokens, "completion budget per classification")
        ->capture_default_str();
    search->add_option("--temperature", so->temperature)->capture_default_str();
    search->add_option("--seed", so->seed, "RNG seed")->capture_default_str();
    search->add_option("--jobs", so->jobs, "parallel queries/classifications")
        ->capture_default_str();
    search->add_option("--classification-log", so->classification_log,
                       "write per-pair verdicts to this CSV (two-phase)");
    add_provider_options(search, *popts_search);
    search->callback([=, &rc] { rc = cmd_search(*popts_search, *so); });

    // evaluate
    auto ev_results = std::make_shared<std::string>();
    auto ev_bench = std::make_shared<std::string>();
    auto ev_ks = std::make_shared<std::vector<int>>(std::vector<int>{10});
    auto ev_variant = std::make_shared<std::string>("all-prefixes");
    auto ev_format = std::make_shared<std::string>("text");
    auto ev_report = std::make_shared<std::string>();
    CLI::App* evaluate_cmd = app.add_subcommand(
        "evaluate", "score a results CSV against a benchmark's ground truth");
    evaluate_cmd->add_option("--results", *ev_results, "results CSV from the search command")
        ->required();
    evaluate_cmd->add_option("--benchmark", *ev_bench, "benchmark directory")->required();
    evaluate_cmd->add_option("--k", *ev_ks, "comma-separated cutoffs, e.g. 2,5,10")
        ->delimiter(',')
        ->capture_default_str();
    evaluate_cmd
        ->add_option("--map-variant", *ev_variant,
                     "all-prefixes averages precision over every returned position; "
                     "hit-prefixes only over hits")
        ->check(CLI::IsMember({"all-prefixes", "hit-prefixes"}))
        ->capture_default_str();
    evaluate_cmd->add_option("--format", *ev_format, "stdout format")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();
    evaluate_cmd->add_option("--report", *ev_report, "also write the JSON report here");
    evaluate_cmd->callback([=, &rc] {
        rc = cmd_evaluate(*ev_results, *ev_bench, *ev_ks, *ev_variant, *ev_format, *ev_report);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const ProviderError& e) {
        std::cerr << "provider error: " << e.what() << "\n";
        return 3;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
