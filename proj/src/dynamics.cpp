#include "fairpic/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "fairpic/error.hpp"

namespace fairpic {

namespace {

void check_dimensions(std::size_t state_groups, const ModelParams& params) {
    if (state_groups != params.groups()) {
        throw ConfigError(fmt::format("state has {} groups but model has {}", state_groups, params.groups()));
    }
}

// Infection force on group j: sum_k beta_jk I_k.
inline void infection_forces(std::span<const Compartments> groups, const ModelParams& params,
                             std::span<double> force) {
    const auto n = groups.size();
    for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            acc += params.beta(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) * groups[k].i;
        }
        force[j] = acc;
    }
}

}  // namespace

std::vector<Compartments> passive_drift(const EpidemicState& state, const ModelParams& params) {
    check_dimensions(state.size(), params);
    std::vector<double> force(state.size());
    infection_forces(state.groups, params, force);
    std::vector<Compartments> out(state.size());
    for (std::size_t j = 0; j < state.size(); ++j) {
        const auto& g = state.groups[j];
        const double infections = g.s * force[j];
        out[j] = {-infections, infections - (params.gamma[j] + params.delta[j]) * g.i, params.gamma[j] * g.i,
                  params.delta[j] * g.i};
    }
    return out;
}

Eigen::MatrixXd control_matrix(const EpidemicState& state) {
    const auto n = static_cast<Eigen::Index>(state.size());
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(4 * n, 2 * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto& c = state.groups[static_cast<std::size_t>(j)];
        g(4 * j + 0, 2 * j + 0) = -c.s;
        g(4 * j + 1, 2 * j + 1) = -c.i;
        g(4 * j + 2, 2 * j + 0) = c.s;
        g(4 * j + 2, 2 * j + 1) = c.i;
    }
    return g;
}

Eigen::MatrixXd actuated_control_matrix(const EpidemicState& state) {
    const auto n = static_cast<Eigen::Index>(state.size());
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto& c = state.groups[static_cast<std::size_t>(j)];
        g(2 * j, 2 * j) = -c.s;
        g(2 * j + 1, 2 * j + 1) = -c.i;
    }
    return g;
}

void normalize_in_place(std::span<Compartments> groups) {
    for (auto& g : groups) {
        if (!std::isfinite(g.s) || !std::isfinite(g.i) || !std::isfinite(g.r) || !std::isfinite(g.d)) {
            throw NumericError("non-finite compartment value during normalization");
        }
        g.s = std::clamp(g.s, 0.0, 1.0);
        g.i = std::clamp(g.i, 0.0, 1.0);
        g.d = std::clamp(g.d, 0.0, 1.0);
        g.r = 1.0 - g.s - g.i - g.d;
        if (g.r < 0.0) {
            // D is unactuated and carries no noise, so it is kept exact; S and I absorb the excess.
            const double scale = (1.0 - g.d) / (g.s + g.i);
            g.s *= scale;
            g.i *= scale;
            g.r = 0.0;
        }
    }
}

EpidemicState normalize_state(std::span<const Compartments> raw) {
    EpidemicState out{{raw.begin(), raw.end()}};
    normalize_in_place(out.groups);
    return out;
}

void advance_in_place(std::span<Compartments> groups, std::span<const GroupControl> control,
                      std::span<const GroupNoise> noise, double dt, const ModelParams& params,
                      std::span<double> scratch) {
    const auto n = groups.size();
    const double sqrt_dt = std::sqrt(dt);
    infection_forces(groups, params, scratch);
    for (std::size_t j = 0; j < n; ++j) {
        auto& g = groups[j];
        const double v = control.empty() ? 0.0 : control[j].v;
        const double l = control.empty() ? 0.0 : control[j].l;
        const double infections = g.s * scratch[j] * dt;
        const double vaccinated = g.s * (v * dt + noise[j].v * sqrt_dt);
        const double isolated = g.i * (l * dt + noise[j].l * sqrt_dt);
        const double recovered = params.gamma[j] * g.i * dt;
        const double died = params.delta[j] * g.i * dt;
        g.s += -infections - vaccinated;
        g.i += infections - recovered - died - isolated;
        g.r += recovered + vaccinated + isolated;
        g.d += died;
    }
    normalize_in_place(groups);
}

EpidemicState euler_maruyama_step(const EpidemicState& state, const ControlInput& control,
                                  const NoiseDraw& noise, double dt, const ModelParams& params) {
    check_dimensions(state.size(), params);
    if (control.size() != state.size() || noise.size() != state.size()) {
        throw ConfigError("control and noise must have one entry per group");
    }
    if (!(dt > 0.0)) throw UsageError("dt must be positive");
    EpidemicState next = state;
    std::vector<double> scratch(state.size());
    advance_in_place(next.groups, control.groups, noise.groups, dt, params, scratch);
    return next;
}

Rollout rollout_uncontrolled(const EpidemicState& start, const TimeGrid& grid, int start_step,
                             const NoiseStream& noise, const ModelParams& params) {
    check_dimensions(start.size(), params);
    if (start_step < 0 || start_step >= grid.steps()) {
        throw UsageError(fmt::format("start_step {} outside [0, {})", start_step, grid.steps()));
    }
    Rollout out;
    out.states.reserve(static_cast<std::size_t>(grid.steps() - start_step + 1));
    out.states.push_back(start);
    const auto zero = ControlInput::zeros(start.size());
    for (int k = start_step; k < grid.steps(); ++k) {
        const auto eps = noise.draw(static_cast<std::uint32_t>(k), params);
        if (k == start_step) out.first_noise = eps;
        out.states.push_back(euler_maruyama_step(out.states.back(), zero, eps, grid.dt(), params));
    }
    return out;
}

}  // namespace fairpic
