#include "fairpic/random.hpp"

#include <cmath>
#include <numbers>

namespace fairpic {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

NoiseStream::NoiseStream(const StreamId& id)
    : trajectory_(id.trajectory),
      decision_step_(id.decision_step),
      purpose_(static_cast<std::uint32_t>(id.purpose)) {
    const std::uint64_t k = mix64(id.root ^ mix64(id.replication));
    key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
}

namespace {

inline std::array<double, 2> box_muller(std::uint32_t a, std::uint32_t b) {
    // 32-bit uniforms; the half-offset keeps u1 inside (0, 1).
    const double u1 = (static_cast<double>(a) + 0.5) * 0x1.0p-32;
    const double u2 = static_cast<double>(b) * 0x1.0p-32;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace

Philox4x32::Counter NoiseStream::block(std::uint32_t step, std::uint32_t group_pair) const {
    // Groups are limited to 2^25 so the top byte is free for the purpose tag.
    return Philox4x32::generate({trajectory_, step, decision_step_, (purpose_ << 24) | group_pair}, key_);
}

std::array<double, 2> NoiseStream::standard_pair(std::uint32_t step, std::uint32_t group) const {
    const auto out = block(step, group >> 1);
    const std::size_t half = 2 * (group & 1u);
    return box_muller(out[half], out[half + 1]);
}

void NoiseStream::draw_into(std::uint32_t step, std::span<const double> sigma_v, std::span<const double> sigma_l,
                            std::span<GroupNoise> out) const {
    const auto n = out.size();
    for (std::size_t j = 0; j < n; j += 2) {
        const auto bits = block(step, static_cast<std::uint32_t>(j >> 1));
        const auto z0 = box_muller(bits[0], bits[1]);
        out[j] = {sigma_v[j] * z0[0], sigma_l[j] * z0[1]};
        if (j + 1 < n) {
            const auto z1 = box_muller(bits[2], bits[3]);
            out[j + 1] = {sigma_v[j + 1] * z1[0], sigma_l[j + 1] * z1[1]};
        }
    }
}

NoiseDraw NoiseStream::draw(std::uint32_t step, const ModelParams& params) const {
    NoiseDraw out = NoiseDraw::zeros(params.groups());
    draw_into(step, {params.sigma_v.data(), params.groups()}, {params.sigma_l.data(), params.groups()}, out.groups);
    return out;
}

}  // namespace fairpic
