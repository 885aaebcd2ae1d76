#include "fairpic/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "fairpic/dynamics.hpp"
#include "fairpic/error.hpp"

namespace fairpic {

void SolverConfig::validate() const {
    if (samples < 1) throw ConfigError("samples must be at least 1");
    if (!(epsilon_actuation > 0.0 && epsilon_actuation <= 1e-3)) {
        throw ConfigError("epsilon_actuation must lie in (0, 1e-3]");
    }
    if (clamp_controls && !(u_max > 0.0)) throw ConfigError("u_max must be positive when clamping");
}

std::vector<double> softmin_weights(std::span<const double> costs, double lambda) {
    if (costs.empty()) throw UsageError("softmin of an empty cost vector");
    if (!(lambda > 0.0)) throw UsageError("lambda must be positive");
    double lowest = std::numeric_limits<double>::infinity();
    for (double c : costs) {
        if (!std::isfinite(c)) throw NumericError("non-finite trajectory cost");
        lowest = std::min(lowest, c);
    }
    std::vector<double> w(costs.size());
    double total = 0.0;
    for (std::size_t m = 0; m < costs.size(); ++m) {
        w[m] = std::exp(-(costs[m] - lowest) / lambda);
        total += w[m];
    }
    // total >= 1 because the minimum contributes exp(0).
    for (double& x : w) x /= total;
    return w;
}

Eigen::MatrixXd gain_matrix(const EpidemicState& state, double epsilon_actuation) {
    const auto n = static_cast<Eigen::Index>(state.size());
    Eigen::MatrixXd gain = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto& c = state.groups[static_cast<std::size_t>(j)];
        if (c.s >= epsilon_actuation) gain(2 * j, 2 * j) = -1.0 / c.s;
        if (c.i >= epsilon_actuation) gain(2 * j + 1, 2 * j + 1) = -1.0 / c.i;
    }
    return gain;
}

namespace {

void check_inputs(const EpidemicState& state, int start_step, const SolverConfig& solver, const CostConfig& cost,
                  const ModelParams& params) {
    if (state.size() != params.groups() || state.size() != cost.groups()) {
        throw ConfigError(fmt::format("dimension mismatch: state {}, model {}, cost {}", state.size(),
                                      params.groups(), cost.groups()));
    }
    if (start_step < 0 || start_step >= solver.grid.steps()) {
        throw UsageError(fmt::format("start_step {} outside [0, {})", start_step, solver.grid.steps()));
    }
}

// One uncontrolled rollout; writes the first-step noise into `first` and returns the cost.
double rollout_cost(const EpidemicState& state, int start_step, const SolverConfig& solver, const CostConfig& cost,
                    const ModelParams& params, const NoiseStream& stream, std::vector<Compartments>& x,
                    std::vector<GroupNoise>& eps, std::vector<double>& scratch, std::span<GroupNoise> first) {
    const auto n = state.size();
    const double dt = solver.grid.dt();
    const int steps = solver.grid.steps();
    std::copy(state.groups.begin(), state.groups.end(), x.begin());
    double running = 0.0;
    for (int k = start_step; k < steps; ++k) {
        running += cost.state_cost_unchecked(x) * dt;
        stream.draw_into(static_cast<std::uint32_t>(k), {params.sigma_v.data(), n}, {params.sigma_l.data(), n},
                         eps);
        if (k == start_step) std::copy(eps.begin(), eps.end(), first.begin());
        advance_in_place(x, {}, eps, dt, params, scratch);
    }
    return running + cost.state_cost_unchecked(x);
}

}  // namespace

RolloutEnsemble sample_ensemble(const EpidemicState& state, int start_step, const SolverConfig& solver,
                                const CostConfig& cost, const ModelParams& params, const RolloutSeed& seed,
                                Execution exec) {
    check_inputs(state, start_step, solver, cost, params);
    const auto n = state.size();
    const int samples = solver.samples;
    RolloutEnsemble out;
    out.groups = n;
    out.costs.resize(static_cast<std::size_t>(samples));
    out.first_noise.resize(static_cast<std::size_t>(samples) * n);

    bool failed = false;
#pragma omp parallel if (exec == Execution::parallel)
    {
        std::vector<Compartments> x(n);
        std::vector<GroupNoise> eps(n);
        std::vector<double> scratch(n);
#pragma omp for schedule(static)
        for (int m = 0; m < samples; ++m) {
            const auto idx = static_cast<std::size_t>(m);
            const NoiseStream stream(seed.stream(static_cast<std::uint32_t>(m)));
            try {
                out.costs[idx] = rollout_cost(state, start_step, solver, cost, params, stream, x, eps, scratch,
                                              std::span<GroupNoise>(out.first_noise).subspan(idx * n, n));
            } catch (const NumericError&) {
#pragma omp atomic write
                failed = true;
            }
        }
    }
    if (failed) throw NumericError("non-finite state encountered during rollout");
    return out;
}

RolloutEnsemble sample_ensemble_reference(const EpidemicState& state, int start_step, const SolverConfig& solver,
                                          const CostConfig& cost, const ModelParams& params,
                                          const RolloutSeed& seed) {
    check_inputs(state, start_step, solver, cost, params);
    RolloutEnsemble out;
    out.groups = state.size();
    for (int m = 0; m < solver.samples; ++m) {
        const NoiseStream stream(seed.stream(static_cast<std::uint32_t>(m)));
        const auto rollout = rollout_uncontrolled(state, solver.grid, start_step, stream, params);
        out.costs.push_back(trajectory_cost(rollout.states, start_step, solver.grid, cost));
        out.first_noise.insert(out.first_noise.end(), rollout.first_noise.groups.begin(),
                               rollout.first_noise.groups.end());
    }
    return out;
}

ControlInput control_from_ensemble(const EpidemicState& state, const RolloutEnsemble& ensemble, double lambda,
                                   double dt, const SolverConfig& solver) {
    const auto n = state.size();
    if (ensemble.groups != n || ensemble.first_noise.size() != ensemble.size() * n) {
        throw ConfigError("ensemble dimension does not match state");
    }
    const auto weights = softmin_weights(ensemble.costs, lambda);

    // Weighted average of G_c(x) eps_m / sqrt(dt), ordered (S_1, I_1, S_2, I_2, ...).
    const Eigen::MatrixXd actuated = actuated_control_matrix(state);
    Eigen::VectorXd mean_noise = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * n));
    for (std::size_t m = 0; m < ensemble.size(); ++m) {
        const auto eps = ensemble.noise_of(m);
        for (std::size_t j = 0; j < n; ++j) {
            mean_noise[static_cast<Eigen::Index>(2 * j)] += weights[m] * eps[j].v;
            mean_noise[static_cast<Eigen::Index>(2 * j + 1)] += weights[m] * eps[j].l;
        }
    }
    const Eigen::VectorXd driven = actuated * mean_noise / std::sqrt(dt);
    const Eigen::VectorXd u = gain_matrix(state, solver.epsilon_actuation) * driven;

    ControlInput out = ControlInput::zeros(n);
    for (std::size_t j = 0; j < n; ++j) {
        double v = u[static_cast<Eigen::Index>(2 * j)];
        double l = u[static_cast<Eigen::Index>(2 * j + 1)];
        if (!std::isfinite(v) || !std::isfinite(l)) throw NumericError("non-finite control");
        if (solver.clamp_controls) {
            v = std::clamp(v, 0.0, solver.u_max);
            l = std::clamp(l, 0.0, solver.u_max);
        }
        out.groups[j] = {v, l};
    }
    return out;
}

ControlInput pic_control(const EpidemicState& state, int start_step, const SolverConfig& solver,
                         const CostConfig& cost, const ModelParams& params, const RolloutSeed& seed,
                         Execution exec) {
    const auto ensemble = sample_ensemble(state, start_step, solver, cost, params, seed, exec);
    return control_from_ensemble(state, ensemble, cost.lambda(), solver.grid.dt(), solver);
}

}  // namespace fairpic
