#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "fairpic/random.hpp"
#include "fairpic/types.hpp"

namespace fairpic {

/// Time derivative of each group under zero control, ordered (S, I, R, D) per group.
std::vector<Compartments> passive_drift(const EpidemicState& state, const ModelParams& params);

/// Full 4J x 2J control transition matrix. Columns per group are (V, L).
Eigen::MatrixXd control_matrix(const EpidemicState& state);

/// Square 2J x 2J actuated submatrix over the (S, I) rows of every group.
/// The R row is dropped since R is fixed by normalization.
Eigen::MatrixXd actuated_control_matrix(const EpidemicState& state);

/// Projects raw per-group values back onto the simplex: clamp S, I, D to [0, 1],
/// absorb the remainder into R, and rescale S, I, D if R would go negative.
/// Throws NumericError on non-finite input.
EpidemicState normalize_state(std::span<const Compartments> raw);
void normalize_in_place(std::span<Compartments> groups);

/// x + f(x) dt + G(x) (u dt + eps sqrt(dt)), followed by normalize_state.
EpidemicState euler_maruyama_step(const EpidemicState& state, const ControlInput& control,
                                  const NoiseDraw& noise, double dt, const ModelParams& params);

/// Allocation-free variant used by the rollout kernels. `control` may be empty (zero control).
/// `scratch` must hold at least J doubles.
void advance_in_place(std::span<Compartments> groups, std::span<const GroupControl> control,
                      std::span<const GroupNoise> noise, double dt, const ModelParams& params,
                      std::span<double> scratch);

struct Rollout {
    std::vector<EpidemicState> states;  // steps start_step .. K inclusive
    NoiseDraw first_noise;
};

/// Uncontrolled rollout from `start` over steps start_step .. K, drawing the noise of
/// absolute step k from `noise.draw(k, ...)`.
Rollout rollout_uncontrolled(const EpidemicState& start, const TimeGrid& grid, int start_step,
                             const NoiseStream& noise, const ModelParams& params);

}  // namespace fairpic
