#pragma once

#include <memory>
#include <span>

#include <Eigen/Core>

#include "fairpic/types.hpp"

namespace fairpic {

/// Maps a state to a nonnegative disparity score. Must vanish when every group has
/// the same unemployment proxy (I + D).
class UnfairnessMeasure {
public:
    virtual ~UnfairnessMeasure() = default;
    virtual double operator()(std::span<const Compartments> groups) const = 0;
};

/// Largest pairwise gap in (I + D) across groups: max_j - min_j.
class PairwiseDisparity final : public UnfairnessMeasure {
public:
    double operator()(std::span<const Compartments> groups) const override;
};

double unfairness_pairwise(const EpidemicState& state);

/// R = lambda * Sigma^{-1} for a diagonal Sigma given by its variances.
/// Throws ConfigError if lambda <= 0 or any variance is not strictly positive.
Eigen::MatrixXd control_cost_matrix(double lambda, const Eigen::VectorXd& variance);

class CostConfig {
public:
    /// `variance` is the 2J noise-covariance diagonal (see ModelParams::noise_variance).
    CostConfig(Eigen::VectorXd weights, double eta, double lambda, const Eigen::VectorXd& variance,
               std::shared_ptr<const UnfairnessMeasure> measure = std::make_shared<PairwiseDisparity>());

    const Eigen::VectorXd& weights() const { return weights_; }
    double eta() const { return eta_; }
    double lambda() const { return lambda_; }
    std::size_t groups() const { return static_cast<std::size_t>(weights_.size()); }
    /// Diagonal of Sigma, ordered (V_1, L_1, V_2, L_2, ...).
    const Eigen::VectorXd& noise_variance() const { return variance_; }
    /// R = lambda Sigma^{-1}. Throws ConfigError if any channel is noise-free.
    Eigen::MatrixXd control_cost_matrix() const;
    /// Diagonal of R; +inf on noise-free channels.
    const Eigen::VectorXd& control_weights() const { return r_diag_; }
    const UnfairnessMeasure& unfairness() const { return *measure_; }

    /// Economic loss sum_j w_j (I_j + D_j).
    double economic_loss(std::span<const Compartments> groups) const;
    /// q(x) without dimension checks; for the rollout kernels.
    double state_cost_unchecked(std::span<const Compartments> groups) const {
        return economic_loss(groups) + eta_ * (*measure_)(groups);
    }

private:
    Eigen::VectorXd weights_;
    double eta_;
    double lambda_;
    Eigen::VectorXd variance_;
    Eigen::VectorXd r_diag_;
    std::shared_ptr<const UnfairnessMeasure> measure_;
};

double state_cost(const EpidemicState& state, const CostConfig& cfg);
double terminal_cost(const EpidemicState& state, const CostConfig& cfg);
/// 0.5 u^T R u. Zero control costs nothing even on noise-free channels; nonzero control on
/// such a channel throws ConfigError.
double control_cost(const ControlInput& u, const CostConfig& cfg);

/// sum_{k=start}^{K-1} q(x_k) dt + psi(x_K). `trajectory` holds states start_step .. K.
double trajectory_cost(std::span<const EpidemicState> trajectory, int start_step, const TimeGrid& grid,
                       const CostConfig& cfg);

}  // namespace fairpic
