#include "fairpic/stats.hpp"

#include <cmath>

#include "fairpic/error.hpp"

namespace fairpic {

double percentile_linear(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw UsageError("percentile of an empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw UsageError("percentile rank outside [0, 1]");
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double mean(std::span<const double> values) {
    if (values.empty()) throw UsageError("mean of an empty sample");
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc / static_cast<double>(values.size());
}

double standard_error(std::span<const double> values) {
    if (values.size() < 2) return 0.0;
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    const auto n = static_cast<double>(values.size());
    return std::sqrt(ss / (n - 1.0) / n);
}

}  // namespace fairpic
