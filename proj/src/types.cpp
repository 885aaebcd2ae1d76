#include "fairpic/types.hpp"

#include <cmath>

#include <fmt/format.h>

#include "fairpic/error.hpp"

namespace fairpic {

void EpidemicState::validate(double tol) const {
    for (std::size_t j = 0; j < groups.size(); ++j) {
        const auto& g = groups[j];
        for (double x : {g.s, g.i, g.r, g.d}) {
            if (!std::isfinite(x)) throw NumericError(fmt::format("group {}: non-finite compartment", j));
            if (x < -tol || x > 1.0 + tol) {
                throw ConfigError(fmt::format("group {}: compartment {} outside [0, 1]", j, x));
            }
        }
        if (std::abs(g.total() - 1.0) > tol) {
            throw ConfigError(fmt::format("group {}: compartments sum to {}, expected 1", j, g.total()));
        }
    }
}

void ModelParams::validate() const {
    const auto n = gamma.size();
    if (n == 0) throw ConfigError("model has no groups");
    if (beta.rows() != n || beta.cols() != n) {
        throw ConfigError(fmt::format("beta must be {0}x{0}, got {1}x{2}", n, beta.rows(), beta.cols()));
    }
    if (delta.size() != n || sigma_v.size() != n || sigma_l.size() != n) {
        throw ConfigError(fmt::format("per-group parameter vectors must have length {}", n));
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            if (!(beta(j, k) >= 0.0)) throw ConfigError("beta entries must be nonnegative");
            if (beta(j, k) != beta(k, j)) {
                throw ConfigError(fmt::format("beta is not symmetric at ({}, {})", j, k));
            }
        }
    }
    auto nonneg = [](const Eigen::VectorXd& v, const char* name) {
        for (double x : v) {
            if (!(x >= 0.0) || !std::isfinite(x)) throw ConfigError(fmt::format("{} must be finite and nonnegative", name));
        }
    };
    nonneg(gamma, "gamma");
    nonneg(delta, "delta");
    nonneg(sigma_v, "sigma_v");
    nonneg(sigma_l, "sigma_l");
}

Eigen::VectorXd ModelParams::noise_variance() const {
    const auto n = gamma.size();
    Eigen::VectorXd out(2 * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        out[2 * j] = sigma_v[j] * sigma_v[j];
        out[2 * j + 1] = sigma_l[j] * sigma_l[j];
    }
    return out;
}

TimeGrid::TimeGrid(double horizon, double dt) : horizon_(horizon), dt_(dt), steps_(0) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("horizon must be positive");
    const double ratio = horizon / dt;
    const double k = std::round(ratio);
    if (k < 1.0 || std::abs(ratio - k) > 1e-9 * std::max(1.0, ratio)) {
        throw ConfigError(fmt::format("horizon {} is not an integer multiple of dt {}", horizon, dt));
    }
    steps_ = static_cast<int>(k);
}

}  // namespace fairpic
