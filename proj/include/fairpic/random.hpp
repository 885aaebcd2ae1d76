#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "fairpic/types.hpp"

namespace fairpic {

/// Philox4x32-10 block cipher (Salmon et al., SC'11). Stateless: the output is a
/// pure function of (counter, key), so streams can be indexed without ordering.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key);
};

/// SplitMix64 finalizer; used to fold seeds and indices into a Philox key.
std::uint64_t mix64(std::uint64_t x);

/// Maps 64 random bits to a double in [0, 1) with 53 bits of precision.
inline double to_unit_interval(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

enum class NoisePurpose : std::uint32_t {
    planning = 0,   // sampled rollouts inside the controller
    execution = 1,  // realized disturbance of the closed-loop plant
};

/// Identity of one noise stream. A planning stream belongs to one sampled trajectory
/// at one decision step of one replication; an execution stream to one replication.
struct StreamId {
    std::uint64_t root = 0;
    std::uint64_t replication = 0;
    NoisePurpose purpose = NoisePurpose::planning;
    std::uint32_t decision_step = 0;
    std::uint32_t trajectory = 0;
};

/// Counter-based Gaussian noise source. `draw(step, ...)` returns the same values no
/// matter which thread calls it or in which order the steps are visited.
class NoiseStream {
public:
    explicit NoiseStream(const StreamId& id);

    /// Two independent standard normals for (time step, group).
    std::array<double, 2> standard_pair(std::uint32_t step, std::uint32_t group) const;

    GroupNoise draw(std::uint32_t step, std::uint32_t group, double sigma_v, double sigma_l) const {
        const auto z = standard_pair(step, group);
        return {sigma_v * z[0], sigma_l * z[1]};
    }

    NoiseDraw draw(std::uint32_t step, const ModelParams& params) const;

    /// Scaled draws for every group at `step`; equal to calling draw(step, j, ...) per group.
    void draw_into(std::uint32_t step, std::span<const double> sigma_v, std::span<const double> sigma_l,
                   std::span<GroupNoise> out) const;

private:
    Philox4x32::Counter block(std::uint32_t step, std::uint32_t group_pair) const;

    Philox4x32::Key key_;
    std::uint32_t trajectory_;
    std::uint32_t decision_step_;
    std::uint32_t purpose_;
};

}  // namespace fairpic
