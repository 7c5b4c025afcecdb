#pragma once

#include <span>
#include <vector>

namespace shoals {

// Linear interpolation between order statistics: h = (n - 1) q, result
// x[floor h] + (h - floor h) (x[floor h + 1] - x[floor h]). Infinite samples
// sort last; an interpolation touching one yields +infinity.
double quantile(std::span<const double> values, double q);

// Arithmetic mean; +infinity if any value is infinite.
double mean_or_inf(std::span<const double> values);

struct QuantileSummary {
  double q25 = 0.0;
  double q50 = 0.0;
  double q75 = 0.0;
  double mean = 0.0;
};

QuantileSummary summarize_quantiles(std::span<const double> values);

}  // namespace shoals
