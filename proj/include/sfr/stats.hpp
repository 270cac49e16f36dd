#pragma once

#include <span>

namespace sfr {

/// Linear-interpolation quantile of an ascending sample, q in [0, 1].
/// Position q * (n - 1) between order statistics; NaN for an empty sample.
[[nodiscard]] double interpolated_quantile(std::span<const double> sorted, double q);

[[nodiscard]] double mean(std::span<const double> values);

/// Standard deviation with the n - 1 denominator; NaN below two values.
[[nodiscard]] double sample_sd(std::span<const double> values);

/// P(|Z| >= |z|) for a standard normal Z.
[[nodiscard]] double normal_two_sided_p(double z);

}  // namespace sfr
