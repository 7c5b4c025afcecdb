#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "shoals/estimators.hpp"
#include "shoals/ledger.hpp"
#include "shoals/problem.hpp"
#include "shoals/random.hpp"

namespace shoals {

inline constexpr double kChemicalAccuracy = 0.0016;

/// Where the optimizers get their estimates. Each call is one device
/// request and is charged to the ledger by the implementation.
class EstimationOracle {
 public:
  virtual ~EstimationOracle() = default;

  virtual std::size_t dimension() const = 0;
  virtual GradientEstimate gradient(std::span<const double> theta,
                                    std::span<const std::uint64_t> counts,
                                    CostLedger& ledger) = 0;
  // f at theta and at trial, `count` draws each, in a single request.
  virtual std::pair<EstimateWithStats, EstimateWithStats> function_pair(
      std::span<const double> theta, std::span<const double> trial, std::uint64_t count,
      CostLedger& ledger) = 0;
  // Uncharged monitoring value.
  virtual double exact_value(std::span<const double> theta) const = 0;
};

/// Shot-noise simulation of a Problem.
class ShotOracle final : public EstimationOracle {
 public:
  ShotOracle(const Problem& problem, Rng& rng) : problem_(problem), rng_(rng) {}

  std::size_t dimension() const override { return problem_.parameter_count(); }
  GradientEstimate gradient(std::span<const double> theta, std::span<const std::uint64_t> counts,
                            CostLedger& ledger) override;
  std::pair<EstimateWithStats, EstimateWithStats> function_pair(
      std::span<const double> theta, std::span<const double> trial, std::uint64_t count,
      CostLedger& ledger) override;
  double exact_value(std::span<const double> theta) const override;

 private:
  const Problem& problem_;
  Rng& rng_;
};

/// Noise-free oracle over arbitrary callables. Estimates carry zero
/// variance and nothing is charged.
class ExactOracle final : public EstimationOracle {
 public:
  using Objective = std::function<double(std::span<const double>)>;
  using Gradient = std::function<std::vector<double>(std::span<const double>)>;

  ExactOracle(std::size_t dimension, Objective f, Gradient grad)
      : dimension_(dimension), f_(std::move(f)), grad_(std::move(grad)) {}

  std::size_t dimension() const override { return dimension_; }
  GradientEstimate gradient(std::span<const double> theta, std::span<const std::uint64_t> counts,
                            CostLedger& ledger) override;
  std::pair<EstimateWithStats, EstimateWithStats> function_pair(
      std::span<const double> theta, std::span<const double> trial, std::uint64_t count,
      CostLedger& ledger) override;
  double exact_value(std::span<const double> theta) const override { return f_(theta); }

 private:
  std::size_t dimension_;
  Objective f_;
  Gradient grad_;
};

struct RunBudget {
  double max_seconds = std::numeric_limits<double>::infinity();
  std::uint64_t max_iterations = 100000;
};

struct RunOptions {
  DeviceModel device = DeviceModel::superconducting();
  RunBudget budget;
  // Target for the accuracy monitor; unset disables it.
  std::optional<double> f_star;
  double threshold = kChemicalAccuracy;
  bool stop_at_threshold = true;
  // Flag divergence once the exact objective exceeds its start by this much.
  double divergence_margin = std::numeric_limits<double>::infinity();
  // Upper bound on any single requested sample size.
  std::uint64_t sample_cap = 10'000'000;
};

enum class RunStatus { Reached, BudgetExhausted, IterationLimit, Diverged, NonFinite };

const char* to_string(RunStatus status) noexcept;

struct IterationRecord {
  std::uint64_t iteration = 0;
  double exact_f = 0.0;
  double f0_est = std::numeric_limits<double>::quiet_NaN();
  double fs_est = std::numeric_limits<double>::quiet_NaN();
  double grad_norm_est = std::numeric_limits<double>::quiet_NaN();
  double grad_norm_sq = std::numeric_limits<double>::quiet_NaN();
  double alpha = 0.0;       // step size used in this iteration
  double alpha_next = 0.0;  // step size handed to the next iteration
  bool accepted = false;
  std::uint64_t n_f = 0;
  std::vector<std::uint64_t> n_g;
  CostLedger ledger;  // cumulative, after this iteration
  double wall_clock_s = 0.0;

  std::uint64_t n_g_total() const noexcept;
};

/// Record 0 is the starting point with an empty ledger; record k >= 1
/// describes the state after iteration k.
struct Trajectory {
  std::string solver;
  std::vector<IterationRecord> records;
  RunStatus status = RunStatus::IterationLimit;
  std::string diagnostic;
  std::vector<std::string> events;
  std::optional<double> f_star;
  double threshold = kChemicalAccuracy;
  // First record within threshold of f_star and within the time budget.
  std::optional<std::size_t> reached;
  std::vector<double> final_theta;

  bool complete() const noexcept { return status == RunStatus::Reached; }
  const CostLedger& final_ledger() const { return records.back().ledger; }
};

struct ShoalsConfig {
  double gamma = 2.0;
  double c = 0.2;
  double alpha_max = 1.0;
  double alpha0 = 1.0;
  double p = 0.1;
  double eps_f = kChemicalAccuracy;
  double eps_g = 0.04;  // sqrt(eps_f)
  std::uint64_t warmup_samples = 30;

  void validate() const;
};

// Quantities SHOALS needs before its first variance measurement.
struct ShoalsPriors {
  double lipschitz = 1.0;
  double f_variance = 1.0;
  double grad_variance = 1.0;

  static ShoalsPriors from(const Problem& problem);
};

// f_s <= f_0 - c * alpha * |g|^2 + 2 eps_f
bool sufficient_decrease(double f0, double fs, double alpha, double grad_norm_sq, double c,
                         double eps_f) noexcept;
// min(alpha_max, gamma * alpha) on acceptance, alpha / gamma otherwise.
double next_step_size(double alpha, bool accepted, const ShoalsConfig& config) noexcept;

Trajectory shoals_run(EstimationOracle& oracle, const ShoalsConfig& config,
                      const ShoalsPriors& priors, std::span<const double> theta0,
                      const RunOptions& options);

struct SgdConfig {
  std::optional<double> alpha;  // defaults to 1 / L_g
  std::uint64_t batch = 100;
};

Trajectory sgd_run(EstimationOracle& oracle, double alpha, std::uint64_t batch,
                   std::span<const double> theta0, const RunOptions& options);

struct AdamConfig {
  std::optional<double> alpha;  // defaults to 1 / L_g
  std::uint64_t batch = 100;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double offset = 1e-8;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t t = 0;
};

// One bias-corrected Adam update applied to theta in place.
void adam_step(std::vector<double>& theta, std::span<const double> grad, AdamState& state,
               double alpha, const AdamConfig& config);

Trajectory adam_run(EstimationOracle& oracle, double alpha, const AdamConfig& config,
                    std::span<const double> theta0, const RunOptions& options);

/// iCANS1 (individual coupling adaptive number of shots) with per-coordinate
/// shot counts clipped to [s_min, s_max], where s_max is the recommendation
/// of the coordinate with the largest expected gain per shot.
struct IcansConfig {
  std::optional<double> alpha;  // defaults to 1 / L_g
  std::uint64_t s_min = 30;
  double mu = 0.99;     // EWMA decay
  double bias = 1e-6;   // regularizes the gradient-squared denominator

  void validate(double lipschitz, double alpha) const;
};

// ceil( 2 L alpha / (2 - L alpha) * variance / (gradient^2 + bias_term) )
std::uint64_t icans_shot_recommendation(double variance, double gradient, double lipschitz_alpha,
                                        double bias_term);

Trajectory icans_run(EstimationOracle& oracle, double lipschitz, double alpha,
                     const IcansConfig& config, std::span<const double> theta0,
                     const RunOptions& options);

using SolverSettings = std::variant<ShoalsConfig, SgdConfig, AdamConfig, IcansConfig>;

struct SolverSpec {
  std::string name;
  SolverSettings settings;
};

// Runs any configured solver on a shot-noise simulation of `problem`. Fills
// f_star (when unset) from the dense ground energy and the divergence margin
// from 10 C.
Trajectory run_solver(const Problem& problem, const SolverSpec& solver, Rng& rng,
                      std::span<const double> theta0, RunOptions options);

// Uniform over [-pi, pi)^n.
std::vector<double> random_initial_point(std::size_t n, Rng& rng);

}  // namespace shoals
