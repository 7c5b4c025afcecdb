#include "shoals/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace shoals {

const char* to_string(RunStatus status) noexcept {
  switch (status) {
    case RunStatus::Reached: return "reached";
    case RunStatus::BudgetExhausted: return "budget_exhausted";
    case RunStatus::IterationLimit: return "iteration_limit";
    case RunStatus::Diverged: return "diverged";
    case RunStatus::NonFinite: return "non_finite";
  }
  return "unknown";
}

std::uint64_t IterationRecord::n_g_total() const noexcept {
  return std::accumulate(n_g.begin(), n_g.end(), std::uint64_t{0});
}

// ---------------------------------------------------------------------------
// Oracles

GradientEstimate ShotOracle::gradient(std::span<const double> theta,
                                      std::span<const std::uint64_t> counts,
                                      CostLedger& ledger) {
  return estimate_grad(problem_, theta, counts, rng_, ledger);
}

std::pair<EstimateWithStats, EstimateWithStats> ShotOracle::function_pair(
    std::span<const double> theta, std::span<const double> trial, std::uint64_t count,
    CostLedger& ledger) {
  auto at_theta = sample_f(problem_, theta, count, rng_);
  auto at_trial = sample_f(problem_, trial, count, rng_);
  const std::uint64_t per_point = problem_.circuits_per_f();
  ledger.batch_request(2 * per_point, 2 * count * per_point);
  return {at_theta, at_trial};
}

double ShotOracle::exact_value(std::span<const double> theta) const {
  return exact_objective(problem_, theta);
}

GradientEstimate ExactOracle::gradient(std::span<const double> theta,
                                       std::span<const std::uint64_t> counts, CostLedger&) {
  GradientEstimate out;
  out.values = grad_(theta);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.coordinates.push_back({out.values[i], 0.0, i < counts.size() ? counts[i] : 0});
  }
  return out;
}

std::pair<EstimateWithStats, EstimateWithStats> ExactOracle::function_pair(
    std::span<const double> theta, std::span<const double> trial, std::uint64_t count,
    CostLedger&) {
  return {{f_(theta), 0.0, count}, {f_(trial), 0.0, count}};
}

// ---------------------------------------------------------------------------
// Run bookkeeping shared by every optimizer.

namespace {

bool all_finite(std::span<const double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

class RunMonitor {
 public:
  RunMonitor(EstimationOracle& oracle, const RunOptions& options, std::string solver,
             std::span<const double> theta0, double alpha0)
      : oracle_(oracle), options_(options) {
    if (theta0.size() != oracle.dimension()) {
      throw std::invalid_argument("initial point has wrong dimension");
    }
    if (options.budget.max_iterations == 0 || !(options.budget.max_seconds > 0.0)) {
      throw std::invalid_argument("run budget must be positive");
    }
    options.device.validate();
    traj_.solver = std::move(solver);
    traj_.f_star = options.f_star;
    traj_.threshold = options.threshold;
    IterationRecord first;
    first.exact_f = oracle.exact_value(theta0);
    first.alpha = alpha0;
    first.alpha_next = alpha0;
    initial_f_ = first.exact_f;
    traj_.records.push_back(first);
    check_reached();
  }

  CostLedger ledger;

  bool done() const noexcept { return done_; }

  // Decides whether another iteration may begin.
  bool may_start() {
    if (done_) return false;
    if (options_.stop_at_threshold && traj_.reached) {
      return stop(RunStatus::Reached);
    }
    if (traj_.records.size() > options_.budget.max_iterations) {
      return stop(RunStatus::IterationLimit);
    }
    if (options_.device.wall_clock(ledger) >= options_.budget.max_seconds) {
      return stop(RunStatus::BudgetExhausted);
    }
    return true;
  }

  std::uint64_t next_iteration() const noexcept { return traj_.records.size(); }

  std::uint64_t cap(std::uint64_t requested, const char* what) {
    if (requested <= options_.sample_cap) return requested;
    std::ostringstream msg;
    msg << "iteration " << next_iteration() << ": " << what << " sample size " << requested
        << " truncated to " << options_.sample_cap;
    traj_.events.push_back(msg.str());
    return options_.sample_cap;
  }

  void fail_non_finite(const std::string& what) {
    traj_.diagnostic = "non-finite " + what + " at iteration " + std::to_string(next_iteration());
    stop(RunStatus::NonFinite);
  }

  void record(IterationRecord rec, std::span<const double> theta) {
    rec.iteration = traj_.records.size();
    rec.exact_f = oracle_.exact_value(theta);
    rec.ledger = ledger;
    rec.wall_clock_s = options_.device.wall_clock(ledger);
    traj_.records.push_back(std::move(rec));
    check_reached();
    if (traj_.records.back().exact_f > initial_f_ + options_.divergence_margin) {
      traj_.diagnostic = "exact objective exceeded its initial value by more than the margin";
      stop(RunStatus::Diverged);
    }
  }

  Trajectory finish(std::span<const double> theta) {
    if (!done_) may_start();
    traj_.final_theta.assign(theta.begin(), theta.end());
    return std::move(traj_);
  }

 private:
  void check_reached() {
    if (traj_.reached || !traj_.f_star) return;
    const auto& r = traj_.records.back();
    if (std::abs(r.exact_f - *traj_.f_star) <= options_.threshold &&
        r.wall_clock_s <= options_.budget.max_seconds) {
      traj_.reached = traj_.records.size() - 1;
    }
  }

  bool stop(RunStatus status) {
    traj_.status = status;
    done_ = true;
    return false;
  }

  EstimationOracle& oracle_;
  const RunOptions& options_;
  Trajectory traj_;
  double initial_f_ = 0.0;
  bool done_ = false;
};

}  // namespace

// ---------------------------------------------------------------------------
// SHOALS

void ShoalsConfig::validate() const {
  if (!(gamma > 1.0)) throw std::invalid_argument("gamma must exceed 1");
  if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("c must lie in (0, 1)");
  if (!(alpha_max > 0.0)) throw std::invalid_argument("alpha_max must be positive");
  if (!(alpha0 > 0.0 && alpha0 <= alpha_max)) {
    throw std::invalid_argument("alpha0 must lie in (0, alpha_max]");
  }
  if (!(p > 0.0 && p < 0.5)) throw std::invalid_argument("p must lie in (0, 1/2)");
  if (!(eps_f >= 0.0) || !std::isfinite(eps_f)) throw std::invalid_argument("eps_f must be >= 0");
  if (!(eps_g > 0.0) || !std::isfinite(eps_g)) throw std::invalid_argument("eps_g must be positive");
  if (warmup_samples < kMinSampleSize) throw std::invalid_argument("warm-up size must be >= 2");
}

ShoalsPriors ShoalsPriors::from(const Problem& problem) {
  const double v = problem.hamiltonian().single_shot_variance_bound();
  return {lipschitz_bound(problem), v, v};
}

bool sufficient_decrease(double f0, double fs, double alpha, double grad_norm_sq, double c,
                         double eps_f) noexcept {
  return fs <= f0 - c * alpha * grad_norm_sq + 2.0 * eps_f;
}

double next_step_size(double alpha, bool accepted, const ShoalsConfig& config) noexcept {
  return accepted ? std::min(config.alpha_max, config.gamma * alpha) : alpha / config.gamma;
}

Trajectory shoals_run(EstimationOracle& oracle, const ShoalsConfig& config,
                      const ShoalsPriors& priors, std::span<const double> theta0,
                      const RunOptions& options) {
  config.validate();
  if (!(priors.lipschitz >= 1.0)) throw std::invalid_argument("L_g must be >= 1");
  const std::size_t n = oracle.dimension();
  RunMonitor run(oracle, options, "shoals", theta0, config.alpha0);

  std::vector<double> theta(theta0.begin(), theta0.end());
  double alpha = config.alpha0;
  std::vector<double> grad_variances(n, priors.grad_variance);
  double f_variance = priors.f_variance;
  std::vector<double> prev_gradient;

  if (run.may_start()) {
    // Warm-up estimate: supplies the gradient magnitudes used by the first
    // sample-size rule.
    const std::vector<std::uint64_t> warm(n, config.warmup_samples);
    auto g = oracle.gradient(theta, warm, run.ledger);
    if (!all_finite(g.values)) {
      run.fail_non_finite("warm-up gradient estimate");
    }
    prev_gradient = std::move(g.values);
  }

  while (run.may_start()) {
    IterationRecord rec;
    rec.alpha = alpha;
    rec.n_g = gradient_sample_sizes(grad_variances, alpha, prev_gradient, priors.lipschitz,
                                    config.p, config.eps_g);
    for (auto& count : rec.n_g) count = run.cap(count, "gradient");

    const GradientEstimate g = oracle.gradient(theta, rec.n_g, run.ledger);
    if (!all_finite(g.values)) {
      run.fail_non_finite("gradient estimate");
      break;
    }
    const double grad_norm_sq = g.norm_squared();

    std::vector<double> trial(n);
    for (std::size_t i = 0; i < n; ++i) trial[i] = theta[i] - alpha * g.values[i];

    rec.n_f = f_variance > 0.0
                  ? function_sample_size(f_variance, alpha, grad_norm_sq, config.p, config.eps_f)
                  : kMinSampleSize;
    rec.n_f = run.cap(rec.n_f, "function");
    const auto [f0, fs] = oracle.function_pair(theta, trial, rec.n_f, run.ledger);
    if (!std::isfinite(f0.mean) || !std::isfinite(fs.mean)) {
      run.fail_non_finite("function estimate");
      break;
    }

    rec.f0_est = f0.mean;
    rec.fs_est = fs.mean;
    rec.grad_norm_sq = grad_norm_sq;
    rec.grad_norm_est = std::sqrt(grad_norm_sq);
    rec.accepted = sufficient_decrease(f0.mean, fs.mean, alpha, grad_norm_sq, config.c,
                                       config.eps_f);
    rec.alpha_next = next_step_size(alpha, rec.accepted, config);
    if (rec.accepted) theta = std::move(trial);
    alpha = rec.alpha_next;

    grad_variances = g.variances();
    f_variance = std::max(f0.sample_variance, fs.sample_variance);
    prev_gradient = g.values;
    run.record(std::move(rec), theta);
  }
  return run.finish(theta);
}

// ---------------------------------------------------------------------------
// Stochastic-gradient baselines

namespace {

template <typename Update>
Trajectory gradient_loop(EstimationOracle& oracle, std::string name, double alpha,
                         std::uint64_t batch, std::span<const double> theta0,
                         const RunOptions& options, Update&& update) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be positive");
  if (batch < kMinSampleSize) throw std::invalid_argument("batch size must be >= 2");
  RunMonitor run(oracle, options, std::move(name), theta0, alpha);
  std::vector<double> theta(theta0.begin(), theta0.end());
  const std::vector<std::uint64_t> counts(theta.size(), run.cap(batch, "batch"));
  while (run.may_start()) {
    IterationRecord rec;
    rec.alpha = alpha;
    rec.alpha_next = alpha;
    rec.accepted = true;
    rec.n_g = counts;
    const GradientEstimate g = oracle.gradient(theta, counts, run.ledger);
    if (!all_finite(g.values)) {
      run.fail_non_finite("gradient estimate");
      break;
    }
    rec.grad_norm_sq = g.norm_squared();
    rec.grad_norm_est = std::sqrt(rec.grad_norm_sq);
    update(theta, g.values);
    run.record(std::move(rec), theta);
  }
  return run.finish(theta);
}

}  // namespace

Trajectory sgd_run(EstimationOracle& oracle, double alpha, std::uint64_t batch,
                   std::span<const double> theta0, const RunOptions& options) {
  return gradient_loop(oracle, "sgd", alpha, batch, theta0, options,
                       [alpha](std::vector<double>& theta, std::span<const double> g) {
                         for (std::size_t i = 0; i < theta.size(); ++i) theta[i] -= alpha * g[i];
                       });
}

void adam_step(std::vector<double>& theta, std::span<const double> grad, AdamState& state,
               double alpha, const AdamConfig& config) {
  if (state.m.empty()) {
    state.m.assign(theta.size(), 0.0);
    state.v.assign(theta.size(), 0.0);
  }
  ++state.t;
  const double t = static_cast<double>(state.t);
  const double m_correction = 1.0 - std::pow(config.beta1, t);
  const double v_correction = 1.0 - std::pow(config.beta2, t);
  for (std::size_t i = 0; i < theta.size(); ++i) {
    state.m[i] = config.beta1 * state.m[i] + (1.0 - config.beta1) * grad[i];
    state.v[i] = config.beta2 * state.v[i] + (1.0 - config.beta2) * grad[i] * grad[i];
    const double m_hat = state.m[i] / m_correction;
    const double v_hat = state.v[i] / v_correction;
    theta[i] -= alpha * m_hat / (std::sqrt(v_hat) + config.offset);
  }
}

Trajectory adam_run(EstimationOracle& oracle, double alpha, const AdamConfig& config,
                    std::span<const double> theta0, const RunOptions& options) {
  if (!(config.beta1 >= 0.0 && config.beta1 < 1.0) || !(config.beta2 >= 0.0 && config.beta2 < 1.0)) {
    throw std::invalid_argument("Adam momentum parameters must lie in [0, 1)");
  }
  if (!(config.offset > 0.0)) throw std::invalid_argument("Adam offset must be positive");
  AdamState state;
  return gradient_loop(oracle, "adam", alpha, config.batch, theta0, options,
                       [&](std::vector<double>& theta, std::span<const double> g) {
                         adam_step(theta, g, state, alpha, config);
                       });
}

// ---------------------------------------------------------------------------
// iCANS1

void IcansConfig::validate(double lipschitz, double step) const {
  if (s_min < kMinSampleSize) throw std::invalid_argument("s_min must be >= 2");
  if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("mu must lie in (0, 1)");
  if (!(bias >= 0.0)) throw std::invalid_argument("bias must be nonnegative");
  if (!(step > 0.0) || !(lipschitz * step < 2.0)) {
    throw std::invalid_argument("iCANS needs 0 < L * alpha < 2");
  }
}

std::uint64_t icans_shot_recommendation(double variance, double gradient, double lipschitz_alpha,
                                        double bias_term) {
  const double scale = 2.0 * lipschitz_alpha / (2.0 - lipschitz_alpha);
  const double denom = gradient * gradient + bias_term;
  if (variance <= 0.0) return 0;
  if (denom <= 0.0) return ceil_to_count(std::numeric_limits<double>::infinity());
  return ceil_to_count(scale * variance / denom);
}

Trajectory icans_run(EstimationOracle& oracle, double lipschitz, double alpha,
                     const IcansConfig& config, std::span<const double> theta0,
                     const RunOptions& options) {
  config.validate(lipschitz, alpha);
  const std::size_t n = oracle.dimension();
  RunMonitor run(oracle, options, "icans1", theta0, alpha);
  std::vector<double> theta(theta0.begin(), theta0.end());
  std::vector<std::uint64_t> shots(n, config.s_min);
  std::vector<double> chi(n, 0.0);
  std::vector<double> xi(n, 0.0);
  const double la = lipschitz * alpha;
  double mu_power = 1.0;  // mu^k

  while (run.may_start()) {
    IterationRecord rec;
    rec.alpha = alpha;
    rec.alpha_next = alpha;
    rec.accepted = true;
    rec.n_g = shots;
    const GradientEstimate g = oracle.gradient(theta, shots, run.ledger);
    if (!all_finite(g.values)) {
      run.fail_non_finite("gradient estimate");
      break;
    }
    rec.grad_norm_sq = g.norm_squared();
    rec.grad_norm_est = std::sqrt(rec.grad_norm_sq);
    for (std::size_t i = 0; i < n; ++i) theta[i] -= alpha * g.values[i];

    const double correction = 1.0 - mu_power * config.mu;  // 1 - mu^{k+1}
    std::vector<double> gain(n);
    std::vector<std::uint64_t> recommended(n);
    for (std::size_t i = 0; i < n; ++i) {
      chi[i] = config.mu * chi[i] + (1.0 - config.mu) * g.values[i];
      xi[i] = config.mu * xi[i] + (1.0 - config.mu) * g.coordinates[i].sample_variance;
      const double chi_hat = chi[i] / correction;
      const double xi_hat = xi[i] / correction;
      recommended[i] = std::max<std::uint64_t>(
          1, icans_shot_recommendation(xi_hat, chi_hat, la, config.bias * mu_power));
      const double s = static_cast<double>(recommended[i]);
      gain[i] = ((alpha - 0.5 * lipschitz * alpha * alpha) * chi_hat * chi_hat -
                 0.5 * lipschitz * alpha * alpha * xi_hat / s) /
                s;
    }
    const auto best = static_cast<std::size_t>(
        std::distance(gain.begin(), std::max_element(gain.begin(), gain.end())));
    const std::uint64_t s_max = recommended[best];
    for (std::size_t i = 0; i < n; ++i) {
      shots[i] = run.cap(std::max(config.s_min, std::min(recommended[i], s_max)), "gradient");
    }
    mu_power *= config.mu;
    run.record(std::move(rec), theta);
  }
  return run.finish(theta);
}

// ---------------------------------------------------------------------------

std::vector<double> random_initial_point(std::size_t n, Rng& rng) {
  std::vector<double> theta(n);
  for (auto& t : theta) t = rng.uniform(-std::numbers::pi, std::numbers::pi);
  return theta;
}

Trajectory run_solver(const Problem& problem, const SolverSpec& solver, Rng& rng,
                      std::span<const double> theta0, RunOptions options) {
  if (!options.f_star) options.f_star = exact_ground_energy(problem.hamiltonian());
  options.divergence_margin = 10.0 * problem.hamiltonian().error_bound();
  const double lipschitz = lipschitz_bound(problem);
  ShotOracle oracle(problem, rng);
  Trajectory traj = std::visit(
      [&](const auto& cfg) -> Trajectory {
        using T = std::decay_t<decltype(cfg)>;
        if constexpr (std::is_same_v<T, ShoalsConfig>) {
          return shoals_run(oracle, cfg, ShoalsPriors::from(problem), theta0, options);
        } else if constexpr (std::is_same_v<T, SgdConfig>) {
          return sgd_run(oracle, cfg.alpha.value_or(1.0 / lipschitz), cfg.batch, theta0, options);
        } else if constexpr (std::is_same_v<T, AdamConfig>) {
          return adam_run(oracle, cfg.alpha.value_or(1.0 / lipschitz), cfg, theta0, options);
        } else {
          return icans_run(oracle, lipschitz, cfg.alpha.value_or(1.0 / lipschitz), cfg, theta0,
                           options);
        }
      },
      solver.settings);
  traj.solver = solver.name;
  return traj;
}

}  // namespace shoals
