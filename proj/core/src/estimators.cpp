#include "shoals/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace shoals {

EstimateWithStats RunningStats::summary() const {
  return {mean_, sample_variance(), count_};
}

EstimateWithStats summarize(std::span<const double> draws) {
  if (draws.size() < 2) throw std::invalid_argument("at least two draws are needed");
  RunningStats stats;
  for (double d : draws) stats.add(d);
  return stats.summary();
}

double GradientEstimate::norm_squared() const noexcept {
  double sum = 0.0;
  for (double v : values) sum += v * v;
  return sum;
}

double GradientEstimate::variance_inf_norm() const noexcept {
  double out = 0.0;
  for (const auto& c : coordinates) out = std::max(out, c.sample_variance);
  return out;
}

std::vector<double> GradientEstimate::variances() const {
  std::vector<double> out;
  out.reserve(coordinates.size());
  for (const auto& c : coordinates) out.push_back(c.sample_variance);
  return out;
}

std::uint64_t GradientEstimate::total_samples() const noexcept {
  std::uint64_t sum = 0;
  for (const auto& c : coordinates) sum += c.sample_count;
  return sum;
}

EstimateWithStats sample_f(const Problem& problem, std::span<const double> theta,
                           std::uint64_t count, Rng& rng) {
  if (count < kMinSampleSize) throw std::invalid_argument("function sample size must be >= 2");
  const SingleShotSampler sampler(problem.hamiltonian(), prepare_state(problem.ansatz(), theta));
  RunningStats stats;
  for (std::uint64_t k = 0; k < count; ++k) stats.add(sampler.draw(rng));
  return stats.summary();
}

GradientEstimate sample_grad(const Problem& problem, std::span<const double> theta,
                             std::span<const std::uint64_t> counts, Rng& rng) {
  const std::size_t n = problem.parameter_count();
  if (counts.size() != n || theta.size() != n) {
    throw std::invalid_argument("gradient sample counts must match the parameter count");
  }
  GradientEstimate out;
  out.values.resize(n);
  out.coordinates.resize(n);
  std::vector<double> point(theta.begin(), theta.end());
  const auto& h = problem.hamiltonian();
  for (std::size_t i = 0; i < n; ++i) {
    if (counts[i] < kMinSampleSize) {
      throw std::invalid_argument("gradient sample size for coordinate " + std::to_string(i) +
                                  " must be >= 2");
    }
    point[i] = theta[i] + std::numbers::pi / 2.0;
    const SingleShotSampler plus(h, prepare_state(problem.ansatz(), point));
    point[i] = theta[i] - std::numbers::pi / 2.0;
    const SingleShotSampler minus(h, prepare_state(problem.ansatz(), point));
    point[i] = theta[i];
    RunningStats stats;
    for (std::uint64_t k = 0; k < counts[i]; ++k) {
      const double f_plus = plus.draw(rng);
      const double f_minus = minus.draw(rng);
      stats.add(0.5 * (f_plus - f_minus));
    }
    out.coordinates[i] = stats.summary();
    out.values[i] = stats.mean();
  }
  return out;
}

EstimateWithStats estimate_f(const Problem& problem, std::span<const double> theta,
                             std::uint64_t count, Rng& rng, CostLedger& ledger) {
  auto est = sample_f(problem, theta, count, rng);
  ledger.batch_request(problem.circuits_per_f(), count * problem.circuits_per_f());
  return est;
}

std::uint64_t gradient_shots(const Problem& problem, std::span<const std::uint64_t> counts) {
  const std::uint64_t total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  return 2 * problem.circuits_per_f() * total;
}

GradientEstimate estimate_grad(const Problem& problem, std::span<const double> theta,
                               std::span<const std::uint64_t> counts, Rng& rng,
                               CostLedger& ledger) {
  auto est = sample_grad(problem, theta, counts, rng);
  ledger.batch_request(problem.circuits_per_g(), gradient_shots(problem, counts));
  return est;
}

std::uint64_t ceil_to_count(double x) {
  if (std::isnan(x)) throw std::invalid_argument("sample size is NaN");
  constexpr double kLimit = 9.0e18;
  if (x >= kLimit) return static_cast<std::uint64_t>(kLimit);
  if (x <= 0.0) return 0;
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, x)) return static_cast<std::uint64_t>(nearest);
  return static_cast<std::uint64_t>(std::ceil(x));
}

namespace {

void check_probability(double p) {
  if (!(p > 0.0 && p < 0.5)) throw std::invalid_argument("p must lie in (0, 1/2)");
}

// s^2 / denom, with the 0/0 case resolved to zero variance.
double ratio(double variance, double denom) {
  if (variance <= 0.0) return 0.0;
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  return variance / denom;
}

}  // namespace

std::vector<std::uint64_t> gradient_sample_sizes(std::span<const double> prev_variances,
                                                 double alpha,
                                                 std::span<const double> prev_gradient,
                                                 double lipschitz, double p, double eps_g) {
  check_probability(p);
  if (!(eps_g > 0.0)) throw std::invalid_argument("eps_g must be positive");
  if (!(lipschitz >= 1.0)) throw std::invalid_argument("L_g must be >= 1");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (prev_variances.size() != prev_gradient.size()) {
    throw std::invalid_argument("variance and gradient vectors differ in length");
  }
  std::vector<std::uint64_t> out(prev_variances.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double tolerance = std::max(lipschitz * alpha * std::abs(prev_gradient[i]), eps_g);
    out[i] = std::max(kMinSampleSize,
                      ceil_to_count(ratio(prev_variances[i], p * tolerance * tolerance)));
  }
  return out;
}

std::uint64_t function_sample_size(double prev_variance, double alpha, double grad_norm_sq,
                                   double p, double eps_f) {
  check_probability(p);
  if (!(eps_f >= 0.0)) throw std::invalid_argument("eps_f must be nonnegative");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  const double decrease = alpha * alpha * grad_norm_sq;
  const std::uint64_t by_decrease = ceil_to_count(ratio(prev_variance, p * decrease * decrease));
  const std::uint64_t by_accuracy = ceil_to_count(ratio(prev_variance, eps_f * eps_f));
  return std::max(kMinSampleSize, std::min(by_decrease, by_accuracy));
}

double lipschitz_bound(const Problem& problem) {
  return std::max(1.0, problem.hamiltonian().abs_coefficient_sum());
}

}  // namespace shoals
