// Command-line entry point: simulate, sweep, bench, validate-config.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <omp.h>

#include "fairpic/config.hpp"
#include "fairpic/csv_output.hpp"
#include "fairpic/error.hpp"
#include "fairpic/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct CommonOptions {
    std::string config;
    std::optional<std::string> policy;
    std::optional<double> eta;
    std::optional<int> reps;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    int threads = 0;
};

void add_common(CLI::App& cmd, CommonOptions& o) {
    cmd.add_option("--config", o.config, "Experiment config file")->required();
    cmd.add_option("--policy", o.policy, "multi-group-pic | homogeneous-pic | uncontrolled");
    cmd.add_option("--eta", o.eta, "Unfairness weight");
    cmd.add_option("--reps", o.reps, "Number of closed-loop replications");
    cmd.add_option("--seed", o.seed, "Root seed");
    cmd.add_option("--out", o.out, "Output directory");
    cmd.add_option("--threads", o.threads, "OpenMP threads (0 = runtime default, 1 = serial)");
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(',', start);
        out.push_back(text.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* what) {
    std::vector<T> out;
    for (const auto& tok : split_list(text)) {
        try {
            std::size_t used = 0;
            T value;
            if constexpr (std::is_integral_v<T>) {
                value = static_cast<T>(std::stol(tok, &used));
            } else {
                value = static_cast<T>(std::stod(tok, &used));
            }
            if (used != tok.size()) throw std::invalid_argument(tok);
            out.push_back(value);
        } catch (const std::exception&) {
            throw fairpic::ConfigError(fmt::format("{}: '{}' is not a valid number", what, tok));
        }
    }
    return out;
}

fairpic::ExperimentConfig resolve(const CommonOptions& o) {
    auto cfg = fairpic::load_config(o.config);
    if (o.policy) cfg.policy = fairpic::parse_policy(*o.policy);
    if (o.eta) cfg.eta = *o.eta;
    if (o.reps) cfg.replications = *o.reps;
    if (o.seed) cfg.seed = *o.seed;
    if (o.out) cfg.output = *o.out;
    cfg.validate();
    if (o.threads < 0) throw fairpic::ConfigError("--threads must be nonnegative");
    if (o.threads > 0) omp_set_num_threads(o.threads);
    return cfg;
}

fairpic::Execution execution_for(const CommonOptions& o) {
    return o.threads == 1 ? fairpic::Execution::serial : fairpic::Execution::parallel;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fairness-aware epidemic control by path integral sampling"};
    app.require_subcommand(1);

    CommonOptions sim_opts;
    auto* simulate = app.add_subcommand("simulate", "Closed-loop replications of one policy");
    add_common(*simulate, sim_opts);

    CommonOptions sweep_opts;
    std::string etas;
    auto* sweep = app.add_subcommand("sweep", "Eta sweep and homogeneous baseline (pareto.csv)");
    add_common(*sweep, sweep_opts);
    sweep->add_option("--etas", etas, "Comma-separated eta values");

    CommonOptions bench_opts;
    std::string samples = "250,500,1000,2000";
    fairpic::BenchOptions bench_cfg;
    auto* bench = app.add_subcommand("bench", "Runtime and objective versus sample count (bench.csv)");
    add_common(*bench, bench_opts);
    bench->add_option("--samples", samples, "Comma-separated sample counts")->capture_default_str();
    bench->add_option("--repeats", bench_cfg.timing_repeats, "Timed calls per sample count")->capture_default_str();
    bench->add_option("--sims", bench_cfg.objective_simulations, "Closed-loop simulations per sample count")
        ->capture_default_str();

    std::string validate_path;
    auto* validate = app.add_subcommand("validate-config", "Parse and check a config file");
    validate->add_option("--config", validate_path, "Experiment config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*simulate) {
            const auto cfg = resolve(sim_opts);
            const auto runs = fairpic::run_replications(cfg, execution_for(sim_opts));
            fairpic::write_run_outputs(cfg.output, runs);
            fmt::print("wrote {} replication(s) of {} to {}\n", runs.size(), fairpic::policy_name(cfg.policy),
                       cfg.output.string());
        } else if (*sweep) {
            const auto cfg = resolve(sweep_opts);
            const auto eta_list = etas.empty() ? cfg.etas : parse_list<double>(etas, "--etas");
            const auto result = fairpic::eta_sweep(cfg, eta_list, execution_for(sweep_opts));
            std::filesystem::create_directories(cfg.output);
            fairpic::write_pareto_csv(cfg.output / "pareto.csv", result.rows);
            for (std::size_t i = 0; i < result.rows.size(); ++i) {
                const auto& label = result.rows[i].label;
                const auto sub = label == "homogeneous" ? std::string("homogeneous") : "eta_" + label;
                const auto dir = cfg.output / sub;
                std::filesystem::create_directories(dir);
                fairpic::write_summary_csv(dir / "summary.csv", fairpic::summarize(result.runs[i]));
                fairpic::write_metrics_csv(dir / "metrics.csv", result.runs[i]);
            }
            fmt::print("wrote pareto.csv with {} rows to {}\n", result.rows.size(), cfg.output.string());
        } else if (*bench) {
            const auto cfg = resolve(bench_opts);
            const auto counts = parse_list<int>(samples, "--samples");
            const auto rows = fairpic::bench(cfg, counts, bench_cfg, execution_for(bench_opts));
            std::filesystem::create_directories(cfg.output);
            fairpic::write_bench_csv(cfg.output / "bench.csv", rows);
            for (const auto& r : rows) {
                fmt::print("M={:>6}  runtime={:.4f}s  objective={:.4f}\n", r.samples, r.mean_runtime_s,
                           r.mean_objective);
            }
        } else if (*validate) {
            const auto cfg = fairpic::load_config(validate_path);
            fmt::print("ok: {} groups, K={}, dt={}, M={}, policy={}\n", cfg.groups(), cfg.solver.grid.steps(),
                       cfg.solver.grid.dt(), cfg.solver.samples, fairpic::policy_name(cfg.policy));
        }
    } catch (const fairpic::ConfigError& e) {
        fmt::print(stderr, "config error: {}\n", e.what());
        return kExitConfig;
    } catch (const fairpic::NumericError& e) {
        fmt::print(stderr, "numeric failure: {}\n", e.what());
        return kExitNumeric;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
    return 0;
}
