#include "fairpic/cost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "fairpic/error.hpp"

namespace fairpic {

double PairwiseDisparity::operator()(std::span<const Compartments> groups) const {
    if (groups.empty()) return 0.0;
    double lo = groups[0].unemployed();
    double hi = lo;
    for (const auto& g : groups.subspan(1)) {
        lo = std::min(lo, g.unemployed());
        hi = std::max(hi, g.unemployed());
    }
    return hi - lo;
}

double unfairness_pairwise(const EpidemicState& state) { return PairwiseDisparity{}(state.groups); }

Eigen::MatrixXd control_cost_matrix(double lambda, const Eigen::VectorXd& variance) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be positive");
    for (Eigen::Index i = 0; i < variance.size(); ++i) {
        if (!(variance[i] > 0.0)) {
            throw ConfigError(fmt::format("noise variance of channel {} must be positive; zero noise "
                                          "implies unbounded control cost",
                                          i));
        }
    }
    return (lambda * variance.cwiseInverse()).asDiagonal();
}

CostConfig::CostConfig(Eigen::VectorXd weights, double eta, double lambda, const Eigen::VectorXd& variance,
                       std::shared_ptr<const UnfairnessMeasure> measure)
    : weights_(std::move(weights)), eta_(eta), lambda_(lambda), variance_(variance), measure_(std::move(measure)) {
    if (variance.size() != 2 * weights_.size()) {
        throw ConfigError(fmt::format("noise covariance has {} channels, expected {}", variance.size(),
                                      2 * weights_.size()));
    }
    if (!(eta_ >= 0.0) || !std::isfinite(eta_)) throw ConfigError("eta must be nonnegative");
    for (double w : weights_) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("economic weights must be nonnegative");
    }
    if (!measure_) throw ConfigError("unfairness measure is null");
    if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) throw ConfigError("lambda must be positive");
    r_diag_.resize(variance_.size());
    for (Eigen::Index i = 0; i < variance_.size(); ++i) {
        if (!(variance_[i] >= 0.0) || !std::isfinite(variance_[i])) throw ConfigError("noise variance must be nonnegative");
        r_diag_[i] = variance_[i] > 0.0 ? lambda_ / variance_[i] : std::numeric_limits<double>::infinity();
    }
}

Eigen::MatrixXd CostConfig::control_cost_matrix() const { return fairpic::control_cost_matrix(lambda_, variance_); }

double CostConfig::economic_loss(std::span<const Compartments> groups) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < groups.size(); ++j) acc += weights_[static_cast<Eigen::Index>(j)] * groups[j].unemployed();
    return acc;
}

double state_cost(const EpidemicState& state, const CostConfig& cfg) {
    if (state.size() != cfg.groups()) {
        throw ConfigError(fmt::format("state has {} groups, cost config has {}", state.size(), cfg.groups()));
    }
    return cfg.state_cost_unchecked(state.groups);
}

double terminal_cost(const EpidemicState& state, const CostConfig& cfg) { return state_cost(state, cfg); }

double control_cost(const ControlInput& u, const CostConfig& cfg) {
    if (u.size() != cfg.groups()) throw ConfigError("control dimension does not match cost config");
    const auto& r = cfg.control_weights();
    double acc = 0.0;
    auto term = [&](Eigen::Index idx, double x) {
        if (x == 0.0) return;
        if (std::isinf(r[idx])) throw ConfigError("nonzero control on a noise-free channel has unbounded cost");
        acc += r[idx] * x * x;
    };
    for (std::size_t j = 0; j < u.size(); ++j) {
        const auto idx = static_cast<Eigen::Index>(2 * j);
        term(idx, u.groups[j].v);
        term(idx + 1, u.groups[j].l);
    }
    return 0.5 * acc;
}

double trajectory_cost(std::span<const EpidemicState> trajectory, int start_step, const TimeGrid& grid,
                       const CostConfig& cfg) {
    if (trajectory.empty()) throw UsageError("trajectory is empty");
    const auto expected = static_cast<std::size_t>(grid.steps() - start_step + 1);
    if (start_step < 0 || trajectory.size() != expected) {
        throw UsageError(fmt::format("trajectory has {} states, expected {} for start step {}", trajectory.size(),
                                     expected, start_step));
    }
    double running = 0.0;
    for (std::size_t k = 0; k + 1 < trajectory.size(); ++k) running += state_cost(trajectory[k], cfg) * grid.dt();
    return running + terminal_cost(trajectory.back(), cfg);
}

}  // namespace fairpic
