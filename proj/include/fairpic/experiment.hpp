#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fairpic/config.hpp"
#include "fairpic/solver.hpp"
#include "fairpic/types.hpp"

namespace fairpic {

/// One closed-loop replication.
struct RunRecord {
    std::vector<EpidemicState> states;   // K + 1
    std::vector<ControlInput> controls;  // K
    /// sum_k sum_j w_j (I_j + D_j) dt over k < K, plus the terminal economic term.
    double econ_loss = 0.0;
    /// sum_k 0.5 u_k^T R u_k dt.
    double control_cost = 0.0;
    /// sum_k U(x_k) dt over k < K, plus U(x_K).
    double unfairness_integral = 0.0;
    double unfairness_terminal = 0.0;
    /// econ_loss + eta * unfairness_integral + control_cost.
    double total_cost = 0.0;
};

/// Control of the homogeneous baseline: average the groups into one, solve the
/// single-group problem, apply the result to every group.
ControlInput homogeneous_policy_control(const EpidemicState& world, int start_step, const ExperimentConfig& cfg,
                                        const RolloutSeed& seed, Execution exec = Execution::parallel);

/// Unweighted mean of the groups' compartments.
EpidemicState aggregate_groups(const EpidemicState& world);

/// Receding-horizon simulation of cfg.policy under execution noise drawn from the
/// replication's own stream.
RunRecord closed_loop_simulate(const ExperimentConfig& cfg, std::uint64_t replication,
                               Execution exec = Execution::parallel);

struct SummaryRow {
    int t = 0;
    int group = 0;
    char variable = 'S';  // one of S, I, R, D, V, L
    double mean = 0.0;
    double p10 = 0.0;
    double p90 = 0.0;
};

/// Per-(t, group, variable) mean and 10th/90th percentiles over replications.
std::vector<SummaryRow> summarize(const std::vector<RunRecord>& runs);

/// Runs cfg.replications simulations, replication indices 0 .. N-1.
std::vector<RunRecord> run_replications(const ExperimentConfig& cfg, Execution exec = Execution::parallel);

struct ParetoRow {
    std::string label;  // eta value, or "homogeneous"
    double eta = 0.0;
    double mean_cost = 0.0;  // economic loss + control cost
    double mean_unfairness = 0.0;
    double stderr_cost = 0.0;
    double stderr_unfairness = 0.0;
};

ParetoRow pareto_point(const std::string& label, double eta, const std::vector<RunRecord>& runs);

struct SweepResult {
    std::vector<ParetoRow> rows;  // one per eta, then the homogeneous baseline
    std::vector<std::vector<RunRecord>> runs;
};

SweepResult eta_sweep(const ExperimentConfig& cfg, const std::vector<double>& etas,
                      Execution exec = Execution::parallel);

struct BenchRow {
    int samples = 0;
    double mean_runtime_s = 0.0;
    double mean_objective = 0.0;
};

struct BenchOptions {
    int timing_repeats = 30;
    int objective_simulations = 30;
};

/// Times pic_control at the initial state (k = 0) and evaluates the closed-loop objective
/// for each sample count.
std::vector<BenchRow> bench(const ExperimentConfig& cfg, const std::vector<int>& sample_counts,
                            const BenchOptions& options = {}, Execution exec = Execution::parallel);

}  // namespace fairpic
