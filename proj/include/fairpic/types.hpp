#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace fairpic {

/// Population fractions of one group. Rows of the 4-state block are ordered S, I, R, D.
struct Compartments {
    double s = 0.0;
    double i = 0.0;
    double r = 0.0;
    double d = 0.0;

    double total() const { return s + i + r + d; }
    /// Unemployment proxy used by the cost: infected plus deceased.
    double unemployed() const { return i + d; }

    bool operator==(const Compartments&) const = default;
};

/// Multi-group SIR-D state. Each group is normalized to unit population.
struct EpidemicState {
    std::vector<Compartments> groups;

    std::size_t size() const { return groups.size(); }
    bool operator==(const EpidemicState&) const = default;

    /// Throws NumericError/ConfigError if any group leaves the simplex by more than `tol`.
    void validate(double tol = 1e-9) const;
};

/// A (vaccination, lockdown) pair for one group.
struct GroupControl {
    double v = 0.0;
    double l = 0.0;
    bool operator==(const GroupControl&) const = default;
};

struct ControlInput {
    std::vector<GroupControl> groups;

    static ControlInput zeros(std::size_t n) { return {std::vector<GroupControl>(n)}; }
    std::size_t size() const { return groups.size(); }
    bool operator==(const ControlInput&) const = default;
};

/// One Gaussian draw per (group, channel), already scaled by the channel's standard deviation.
struct GroupNoise {
    double v = 0.0;
    double l = 0.0;
    bool operator==(const GroupNoise&) const = default;
};

struct NoiseDraw {
    std::vector<GroupNoise> groups;

    static NoiseDraw zeros(std::size_t n) { return {std::vector<GroupNoise>(n)}; }
    std::size_t size() const { return groups.size(); }
    bool operator==(const NoiseDraw&) const = default;
};

struct ModelParams {
    Eigen::MatrixXd beta;   // J x J symmetric contact rates (1/day)
    Eigen::VectorXd gamma;  // recovery (1/day)
    Eigen::VectorXd delta;  // mortality (1/day)
    Eigen::VectorXd sigma_v;
    Eigen::VectorXd sigma_l;

    std::size_t groups() const { return static_cast<std::size_t>(gamma.size()); }

    /// Checks shapes, symmetry of beta and nonnegativity; throws ConfigError.
    void validate() const;

    /// Diagonal of the 2J x 2J noise covariance, ordered (V_1, L_1, V_2, L_2, ...).
    Eigen::VectorXd noise_variance() const;
};

/// Uniform time discretization of [0, T].
class TimeGrid {
public:
    /// Throws ConfigError unless dt > 0 and T / dt is a positive integer.
    TimeGrid(double horizon, double dt);

    double horizon() const { return horizon_; }
    double dt() const { return dt_; }
    int steps() const { return steps_; }

private:
    double horizon_;
    double dt_;
    int steps_;
};

}  // namespace fairpic
