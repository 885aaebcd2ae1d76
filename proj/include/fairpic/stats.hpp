#pragma once

#include <span>

namespace fairpic {

/// Percentile with linear interpolation between order statistics (position p * (n - 1)).
/// `sorted` must be ascending and non-empty; p in [0, 1].
double percentile_linear(std::span<const double> sorted, double p);

double mean(std::span<const double> values);

/// Standard error of the mean using the sample standard deviation; 0 for n < 2.
double standard_error(std::span<const double> values);

}  // namespace fairpic
