#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "shoals/ledger.hpp"
#include "shoals/problem.hpp"
#include "shoals/random.hpp"

namespace shoals {

/// Sample mean and unbiased (N-1) sample variance.
struct EstimateWithStats {
  double mean = 0.0;
  double sample_variance = 0.0;
  std::uint64_t sample_count = 0;
};

// Welford accumulator.
class RunningStats {
 public:
  void add(double x) noexcept {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }
  std::uint64_t count() const noexcept { return count_; }
  double mean() const noexcept { return mean_; }
  // Requires count() >= 2.
  double sample_variance() const noexcept {
    return count_ < 2 ? 0.0 : std::max(0.0, m2_ / static_cast<double>(count_ - 1));
  }
  EstimateWithStats summary() const;

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// Throws std::invalid_argument for fewer than two values.
EstimateWithStats summarize(std::span<const double> draws);

struct GradientEstimate {
  std::vector<double> values;
  std::vector<EstimateWithStats> coordinates;

  double norm_squared() const noexcept;
  // Infinity norm of the per-coordinate sample variances.
  double variance_inf_norm() const noexcept;
  std::vector<double> variances() const;
  std::uint64_t total_samples() const noexcept;
};

// Uncharged samplers; callers meter the work through a CostLedger.
EstimateWithStats sample_f(const Problem& problem, std::span<const double> theta,
                           std::uint64_t count, Rng& rng);
GradientEstimate sample_grad(const Problem& problem, std::span<const double> theta,
                             std::span<const std::uint64_t> counts, Rng& rng);

// Mean of `count` single-shot f draws, charged as one request of
// circuits_per_f circuits and count * circuits_per_f shots. count >= 2.
EstimateWithStats estimate_f(const Problem& problem, std::span<const double> theta,
                             std::uint64_t count, Rng& rng, CostLedger& ledger);

// Coordinate i averages counts[i] single-shot partials. Charged as one
// request of circuits_per_g circuits and sum_i 2 * circuits_per_f * counts[i]
// shots. Every count >= 2.
GradientEstimate estimate_grad(const Problem& problem, std::span<const double> theta,
                               std::span<const std::uint64_t> counts, Rng& rng,
                               CostLedger& ledger);

// Shots charged for one gradient request with the given per-coordinate counts.
std::uint64_t gradient_shots(const Problem& problem, std::span<const std::uint64_t> counts);

inline constexpr std::uint64_t kMinSampleSize = 2;

// ceil(x) that snaps to an integer within 1e-9 relative, so rounding noise
// in the inputs cannot push an exact quotient up by one.
std::uint64_t ceil_to_count(double x);

/// Per-coordinate Chebyshev rule
///   N_i = ceil( s_i^2 / (p * max(L_g * alpha * |g_i|, eps_g)^2) ), at least 2.
std::vector<std::uint64_t> gradient_sample_sizes(std::span<const double> prev_variances,
                                                 double alpha,
                                                 std::span<const double> prev_gradient,
                                                 double lipschitz, double p, double eps_g);

/// N_f = min( ceil(s_f^2 / (p * (alpha^2 * |g|^2)^2)), ceil(s_f^2 / eps_f^2) ), at least 2.
/// eps_f = 0 leaves only the first branch.
std::uint64_t function_sample_size(double prev_variance, double alpha, double grad_norm_sq,
                                   double p, double eps_f);

// L_g = max(1, sum_j |a_j|) over measured terms. Applying the shift rule twice
// bounds every |d^2 f / d theta_i^2| by that sum.
double lipschitz_bound(const Problem& problem);

}  // namespace shoals
