#include "fairpic/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <exception>

#include <fmt/format.h>
#include <omp.h>

#include "fairpic/dynamics.hpp"
#include "fairpic/error.hpp"
#include "fairpic/stats.hpp"

namespace fairpic {

EpidemicState aggregate_groups(const EpidemicState& world) {
    if (world.groups.empty()) throw UsageError("cannot aggregate an empty state");
    Compartments sum;
    for (const auto& g : world.groups) {
        sum.s += g.s;
        sum.i += g.i;
        sum.r += g.r;
        sum.d += g.d;
    }
    const auto n = static_cast<double>(world.size());
    return EpidemicState{{Compartments{sum.s / n, sum.i / n, sum.r / n, sum.d / n}}};
}

ControlInput homogeneous_policy_control(const EpidemicState& world, int start_step, const ExperimentConfig& cfg,
                                        const RolloutSeed& seed, Execution exec) {
    const auto single = aggregate_groups(world);
    const auto u = pic_control(single, start_step, cfg.solver, cfg.single_cost(), cfg.single.params, seed, exec);
    ControlInput out;
    out.groups.assign(world.size(), u.groups.front());
    return out;
}

RunRecord closed_loop_simulate(const ExperimentConfig& cfg, std::uint64_t replication, Execution exec) {
    cfg.validate();
    const CostConfig cost = cfg.cost();
    const auto& grid = cfg.solver.grid;
    const double dt = grid.dt();
    const NoiseStream plant_noise(StreamId{cfg.seed, replication, NoisePurpose::execution, 0, 0});

    RunRecord rec;
    rec.states.reserve(static_cast<std::size_t>(grid.steps() + 1));
    rec.controls.reserve(static_cast<std::size_t>(grid.steps()));
    rec.states.push_back(cfg.initial);

    for (int k = 0; k < grid.steps(); ++k) {
        const auto& x = rec.states.back();
        rec.econ_loss += cost.economic_loss(x.groups) * dt;
        rec.unfairness_integral += cost.unfairness()(x.groups) * dt;

        const RolloutSeed seed{cfg.seed, replication, static_cast<std::uint32_t>(k)};
        ControlInput u;
        switch (cfg.policy) {
            case PolicyKind::multi_group_pic:
                u = pic_control(x, k, cfg.solver, cost, cfg.model, seed, exec);
                break;
            case PolicyKind::homogeneous_pic:
                u = homogeneous_policy_control(x, k, cfg, seed, exec);
                break;
            case PolicyKind::uncontrolled:
                u = ControlInput::zeros(x.size());
                break;
        }
        rec.control_cost += control_cost(u, cost) * dt;

        const auto eps = plant_noise.draw(static_cast<std::uint32_t>(k), cfg.model);
        auto next = euler_maruyama_step(x, u, eps, dt, cfg.model);
        rec.controls.push_back(std::move(u));
        rec.states.push_back(std::move(next));
    }

    const auto& last = rec.states.back();
    rec.econ_loss += cost.economic_loss(last.groups);
    rec.unfairness_terminal = cost.unfairness()(last.groups);
    rec.unfairness_integral += rec.unfairness_terminal;
    rec.total_cost = rec.econ_loss + cfg.eta * rec.unfairness_integral + rec.control_cost;
    return rec;
}

std::vector<RunRecord> run_replications(const ExperimentConfig& cfg, Execution exec) {
    cfg.validate();
    const int n = cfg.replications;
    std::vector<RunRecord> runs(static_cast<std::size_t>(n));
    // Parallelize across replications when there are enough of them; otherwise across
    // rollouts inside each control step. Either way the output does not change.
    const bool outer = exec == Execution::parallel && n > 1 && omp_get_max_threads() > 1;
    const Execution inner = outer ? Execution::serial : exec;

    std::exception_ptr error;
    int failed_replication = -1;
#pragma omp parallel for schedule(dynamic) if (outer)
    for (int r = 0; r < n; ++r) {
        try {
            runs[static_cast<std::size_t>(r)] = closed_loop_simulate(cfg, static_cast<std::uint64_t>(r), inner);
        } catch (...) {
#pragma omp critical(fairpic_replication_error)
            if (!error || r < failed_replication) {
                error = std::current_exception();
                failed_replication = r;
            }
        }
    }
    if (error) {
        try {
            std::rethrow_exception(error);
        } catch (const NumericError& e) {
            throw NumericError(fmt::format("replication {} failed: {}", failed_replication, e.what()));
        }
    }
    return runs;
}

std::vector<SummaryRow> summarize(const std::vector<RunRecord>& runs) {
    if (runs.empty()) throw UsageError("no replications to summarize");
    const auto steps = runs.front().controls.size();
    const auto groups = runs.front().states.front().size();
    std::vector<SummaryRow> rows;
    std::vector<double> sample(runs.size());

    auto emit = [&](int t, int j, char var) {
        std::sort(sample.begin(), sample.end());
        rows.push_back({t, j, var, mean(sample), percentile_linear(sample, 0.1), percentile_linear(sample, 0.9)});
    };
    for (std::size_t t = 0; t <= steps; ++t) {
        for (std::size_t j = 0; j < groups; ++j) {
            const int ti = static_cast<int>(t);
            const int ji = static_cast<int>(j);
            for (char var : {'S', 'I', 'R', 'D'}) {
                for (std::size_t r = 0; r < runs.size(); ++r) {
                    const auto& c = runs[r].states[t].groups[j];
                    sample[r] = var == 'S' ? c.s : var == 'I' ? c.i : var == 'R' ? c.r : c.d;
                }
                emit(ti, ji, var);
            }
            if (t == steps) continue;
            for (char var : {'V', 'L'}) {
                for (std::size_t r = 0; r < runs.size(); ++r) {
                    const auto& u = runs[r].controls[t].groups[j];
                    sample[r] = var == 'V' ? u.v : u.l;
                }
                emit(ti, ji, var);
            }
        }
    }
    return rows;
}

ParetoRow pareto_point(const std::string& label, double eta, const std::vector<RunRecord>& runs) {
    std::vector<double> cost;
    std::vector<double> unfairness;
    for (const auto& r : runs) {
        cost.push_back(r.econ_loss + r.control_cost);
        unfairness.push_back(r.unfairness_integral);
    }
    return {label, eta, mean(cost), mean(unfairness), standard_error(cost), standard_error(unfairness)};
}

SweepResult eta_sweep(const ExperimentConfig& cfg, const std::vector<double>& etas, Execution exec) {
    if (etas.empty()) throw ConfigError("eta list is empty");
    SweepResult out;
    for (double eta : etas) {
        ExperimentConfig run_cfg = cfg;
        run_cfg.eta = eta;
        run_cfg.policy = PolicyKind::multi_group_pic;
        out.runs.push_back(run_replications(run_cfg, exec));
        out.rows.push_back(pareto_point(fmt::format("{}", eta), eta, out.runs.back()));
    }
    ExperimentConfig baseline = cfg;
    baseline.policy = PolicyKind::homogeneous_pic;
    out.runs.push_back(run_replications(baseline, exec));
    out.rows.push_back(pareto_point("homogeneous", baseline.eta, out.runs.back()));
    return out;
}

std::vector<BenchRow> bench(const ExperimentConfig& cfg, const std::vector<int>& sample_counts,
                            const BenchOptions& options, Execution exec) {
    if (sample_counts.empty()) throw ConfigError("sample count list is empty");
    if (options.timing_repeats < 1 || options.objective_simulations < 1) {
        throw ConfigError("bench repeats and simulations must be positive");
    }
    std::vector<BenchRow> rows;
    for (int m : sample_counts) {
        ExperimentConfig run_cfg = cfg;
        run_cfg.solver.samples = m;
        run_cfg.policy = PolicyKind::multi_group_pic;
        run_cfg.validate();
        const CostConfig cost = run_cfg.cost();

        // Warm-up call so first-touch allocation is not timed.
        (void)pic_control(run_cfg.initial, 0, run_cfg.solver, cost, run_cfg.model, {cfg.seed, 0, 0}, exec);
        double elapsed = 0.0;
        for (int rep = 0; rep < options.timing_repeats; ++rep) {
            const auto t0 = std::chrono::steady_clock::now();
            (void)pic_control(run_cfg.initial, 0, run_cfg.solver, cost, run_cfg.model,
                              {cfg.seed, static_cast<std::uint64_t>(rep), 0}, exec);
            elapsed += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }

        run_cfg.replications = options.objective_simulations;
        const auto runs = run_replications(run_cfg, exec);
        std::vector<double> objective;
        for (const auto& r : runs) objective.push_back(r.total_cost);
        rows.push_back({m, elapsed / options.timing_repeats, mean(objective)});
    }
    return rows;
}

}  // namespace fairpic
