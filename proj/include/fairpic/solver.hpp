#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "fairpic/cost.hpp"
#include "fairpic/random.hpp"
#include "fairpic/types.hpp"

namespace fairpic {

enum class Execution { serial, parallel };

struct SolverConfig {
    int samples = 1000;
    TimeGrid grid{180.0, 1.0};
    /// Below this, a compartment is treated as empty and its control channel is zeroed.
    double epsilon_actuation = 1e-6;
    /// Optional box constraint [0, u_max] on every control channel.
    bool clamp_controls = false;
    double u_max = 1.0;

    void validate() const;
};

/// Per-trajectory results of one batch of uncontrolled rollouts.
struct RolloutEnsemble {
    std::size_t groups = 0;
    std::vector<double> costs;
    std::vector<GroupNoise> first_noise;  // samples x groups, row-major

    std::size_t size() const { return costs.size(); }
    std::span<const GroupNoise> noise_of(std::size_t m) const {
        return std::span<const GroupNoise>(first_noise).subspan(m * groups, groups);
    }
};

/// exp(-(J_m - min J) / lambda), normalized to sum to one.
/// Throws NumericError on non-finite costs, UsageError on empty input or lambda <= 0.
std::vector<double> softmin_weights(std::span<const double> costs, double lambda);

/// R^{-1} G_c^T (G_c R^{-1} G_c^T)^{-1} for the square actuated block. R cancels, leaving
/// G_c^{-1}; rows whose compartment is below `epsilon_actuation` are zeroed.
Eigen::MatrixXd gain_matrix(const EpidemicState& state, double epsilon_actuation);

/// Stream identity of the sampled rollouts at one decision step. The trajectory
/// index is filled in per sample.
struct RolloutSeed {
    std::uint64_t root = 0;
    std::uint64_t replication = 0;
    std::uint32_t decision_step = 0;

    StreamId stream(std::uint32_t trajectory) const {
        return {root, replication, NoisePurpose::planning, decision_step, trajectory};
    }
};

/// Fused rollout kernel: M uncontrolled rollouts from `state` over steps start_step .. K,
/// accumulating the trajectory cost on the fly. Output is bit-identical for serial and
/// parallel execution.
RolloutEnsemble sample_ensemble(const EpidemicState& state, int start_step, const SolverConfig& solver,
                                const CostConfig& cost, const ModelParams& params, const RolloutSeed& seed,
                                Execution exec = Execution::parallel);

/// Straightforward reference: materializes each trajectory via rollout_uncontrolled and
/// scores it with trajectory_cost. Slow; kept for testing the fused kernel.
RolloutEnsemble sample_ensemble_reference(const EpidemicState& state, int start_step, const SolverConfig& solver,
                                          const CostConfig& cost, const ModelParams& params,
                                          const RolloutSeed& seed);

/// Sampled control law: gain(x) * sum_m w_m G_c(x) eps_m / sqrt(dt).
ControlInput control_from_ensemble(const EpidemicState& state, const RolloutEnsemble& ensemble, double lambda,
                                   double dt, const SolverConfig& solver);

ControlInput pic_control(const EpidemicState& state, int start_step, const SolverConfig& solver,
                         const CostConfig& cost, const ModelParams& params, const RolloutSeed& seed,
                         Execution exec = Execution::parallel);

}  // namespace fairpic
