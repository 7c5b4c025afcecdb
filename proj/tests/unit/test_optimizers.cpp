#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "audit.hpp"
#include "shoals/fixtures.hpp"
#include "shoals/optimizers.hpp"

namespace shoals {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Shoals, AcceptRejectArithmetic) {
  const ShoalsConfig cfg;
  // 1.0 - 0.2 * 1 * 0.25 + 2 * 0.0016 = 0.9532
  EXPECT_TRUE(sufficient_decrease(1.0, 0.94, 1.0, 0.25, cfg.c, cfg.eps_f));
  EXPECT_EQ(next_step_size(1.0, true, cfg), 1.0);
  EXPECT_FALSE(sufficient_decrease(1.0, 0.96, 1.0, 0.25, cfg.c, cfg.eps_f));
  EXPECT_EQ(next_step_size(1.0, false, cfg), 0.5);
  EXPECT_EQ(next_step_size(0.25, true, cfg), 0.5);
  // The +2 eps_f slack: no decrease, but inside the allowance.
  EXPECT_TRUE(sufficient_decrease(1.0, 1.003, 0.1, 0.0, cfg.c, cfg.eps_f));
  EXPECT_FALSE(sufficient_decrease(1.0, 1.0033, 0.1, 0.0, cfg.c, cfg.eps_f));
}

TEST(Shoals, ConfigValidation) {
  ShoalsConfig cfg;
  cfg.gamma = 1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.alpha0 = 2.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.p = 0.6;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Shoals, ExactOracleQuadraticIsArmijo) {
  // f = 2 x^2 + 0.5 y^2, L = 4: alpha = 1 overshoots, forcing rejections.
  ExactOracle oracle(
      2, [](std::span<const double> x) { return 2 * x[0] * x[0] + 0.5 * x[1] * x[1]; },
      [](std::span<const double> x) { return std::vector<double>{4 * x[0], x[1]}; });
  ShoalsConfig cfg;
  cfg.eps_f = 0.0;
  ShoalsPriors priors{4.0, 1.0, 1.0};
  RunOptions opts;
  opts.budget.max_iterations = 60;
  opts.f_star = 0.0;
  opts.threshold = 1e-12;
  const std::vector<double> x0{1.0, -2.0};
  const auto t = shoals_run(oracle, cfg, priors, x0, opts);
  EXPECT_TRUE(audit::shoals_dynamics(t, cfg, false).empty());
  bool saw_reject = false;
  for (std::size_t k = 1; k < t.records.size(); ++k) {
    const auto& r = t.records[k];
    saw_reject |= !r.accepted;
    // Exact estimates: accepted iterates satisfy the Armijo inequality.
    if (r.accepted) {
      EXPECT_LE(r.exact_f, t.records[k - 1].exact_f - cfg.c * r.alpha * r.grad_norm_sq + 1e-15);
    }
  }
  EXPECT_TRUE(saw_reject);
  EXPECT_EQ(t.status, RunStatus::Reached);
  EXPECT_LT(t.records.back().exact_f, 1e-12);
  // The exact oracle charges nothing.
  EXPECT_EQ(t.final_ledger(), CostLedger{});
}

TEST(Shoals, DynamicsAuditOnShotNoise) {
  const auto p = load_bundled_problem("toy-2q");
  Rng rng(42);
  const auto theta0 = random_initial_point(2, rng);
  RunOptions opts;
  opts.stop_at_threshold = false;
  opts.budget.max_iterations = 40;
  const ShoalsConfig cfg;
  const auto t = run_solver(p, {"shoals", cfg}, rng, theta0, opts);
  EXPECT_EQ(t.records.size(), 41u);
  const auto issues = audit::shoals_dynamics(t, cfg);
  for (const auto& s : issues) ADD_FAILURE() << s;
  // Per-iteration switches after the first: 2 t_f + t_g = 12.
  for (std::size_t k = 2; k < t.records.size(); ++k) {
    EXPECT_EQ(t.records[k].ledger.switches - t.records[k - 1].ledger.switches, 12u);
  }
}

TEST(Baselines, OneCommunicationPerIteration) {
  const auto p = load_bundled_problem("toy-2q");
  RunOptions opts;
  opts.stop_at_threshold = false;
  opts.budget.max_iterations = 10;
  const std::vector<SolverSpec> specs{{"sgd", SgdConfig{}}, {"adam", AdamConfig{}},
                                      {"icans", IcansConfig{}}};
  for (const auto& spec : specs) {
    Rng rng(1);
    const std::vector<double> theta0{0.3, 0.4};
    const auto t = run_solver(p, spec, rng, theta0, opts);
    ASSERT_EQ(t.records.size(), 11u) << spec.name;
    for (std::size_t k = 1; k < t.records.size(); ++k) {
      EXPECT_EQ(t.records[k].ledger.communications, k) << spec.name;
      EXPECT_EQ(t.records[k].ledger.switches, 8 * k) << spec.name;
    }
  }
}

TEST(Sgd, DeterministicStep) {
  const auto p = load_bundled_problem("toy-1q");
  Rng rng(0);
  ShotOracle oracle(p, rng);
  RunOptions opts;
  opts.budget.max_iterations = 1;
  const std::vector<double> half{kPi / 2};
  const auto t = sgd_run(oracle, 0.1, 30, half, opts);
  ASSERT_EQ(t.final_theta.size(), 1u);
  EXPECT_NEAR(t.final_theta[0], kPi / 2 + 0.1, 1e-15);
  EXPECT_EQ(t.status, RunStatus::IterationLimit);
}

TEST(Sgd, LedgerOnH2Stats) {
  const auto p = load_bundled_problem("h2");
  Rng rng(0);
  ShotOracle oracle(p, rng);
  RunOptions opts;
  opts.budget.max_iterations = 1;
  const std::vector<double> theta{0.1, 0.2, 0.3};
  const auto t = sgd_run(oracle, 0.1, 100, theta, opts);
  // 2 t_f b per coordinate: 2 * 5 * 100 * 3.
  EXPECT_EQ(t.final_ledger(), (CostLedger{3000, 40, 1}));
}

TEST(Sgd, ZeroGradientIsStationary) {
  const auto p = load_bundled_problem("toy-1q");
  Rng rng(5);
  ShotOracle oracle(p, rng);
  RunOptions opts;
  opts.budget.max_iterations = 1;
  const std::vector<double> zero{0.0};
  const std::uint64_t b = 10000;
  const auto t = sgd_run(oracle, 1.0, b, zero, opts);
  // Single-shot partial variance at 0 is 1/2.
  EXPECT_LE(std::abs(t.final_theta[0]), 4 * std::sqrt(0.5 / b));
}

TEST(Adam, FirstStepIdentity) {
  std::vector<double> theta{0.0};
  AdamState state;
  const std::vector<double> g{0.5};
  adam_step(theta, g, state, 0.1, AdamConfig{});
  EXPECT_NEAR(theta[0], -0.1, 1e-7);
  std::vector<double> still{1.0};
  AdamState s2;
  const std::vector<double> zero{0.0};
  for (int k = 0; k < 5; ++k) adam_step(still, zero, s2, 0.1, AdamConfig{});
  EXPECT_EQ(still[0], 1.0);
}

TEST(Icans, ShotRecommendation) {
  EXPECT_EQ(icans_shot_recommendation(1.0, 0.1, 1.0, 0.0), 200u);
  EXPECT_LT(icans_shot_recommendation(1e-6, 1.0, 1.0, 0.0), 30u);
  EXPECT_THROW(IcansConfig{}.validate(1.0, 2.0), std::invalid_argument);
}

TEST(Icans, ShotsClippedToMinimum) {
  const auto p = load_bundled_problem("toy-2q");
  Rng rng(3);
  RunOptions opts;
  opts.stop_at_threshold = false;
  opts.budget.max_iterations = 30;
  const std::vector<double> theta0{2.0, -1.0};
  const auto t = run_solver(p, {"icans", IcansConfig{}}, rng, theta0, opts);
  for (const auto& r : t.records) {
    for (auto s : r.n_g) EXPECT_GE(s, 30u);
  }
}

TEST(Solvers, SameSeedSameTrajectory) {
  const auto p = load_bundled_problem("toy-2q");
  for (const SolverSpec& spec : {SolverSpec{"shoals", ShoalsConfig{}}, SolverSpec{"adam", AdamConfig{}}}) {
    Rng a(77), b(77);
    const std::vector<double> theta0{1.0, 2.0};
    const auto ta = run_solver(p, spec, a, theta0, {});
    const auto tb = run_solver(p, spec, b, theta0, {});
    ASSERT_EQ(ta.records.size(), tb.records.size());
    for (std::size_t k = 0; k < ta.records.size(); ++k) {
      EXPECT_EQ(ta.records[k].exact_f, tb.records[k].exact_f);
      EXPECT_EQ(ta.records[k].ledger, tb.records[k].ledger);
    }
  }
}

TEST(Solvers, ConvergeOnToyProblems) {
  const std::vector<SolverSpec> specs{{"shoals", ShoalsConfig{}}, {"adam-100", AdamConfig{}},
                                      {"icans1", IcansConfig{}}};
  RunOptions opts;
  opts.budget.max_seconds = 1e4;
  for (const char* name : {"toy-1q", "toy-2q"}) {
    const auto p = load_bundled_problem(name);
    for (const auto& spec : specs) {
      int reached = 0;
      for (std::uint32_t seed = 0; seed < 10; ++seed) {
        Rng init{2022u, seed, 0u};
        Rng shots{2022u, seed, 1u};
        const auto theta0 = random_initial_point(p.parameter_count(), init);
        reached += run_solver(p, spec, shots, theta0, opts).complete();
      }
      EXPECT_GE(reached, 9) << name << " " << spec.name;
    }
  }
}

TEST(Solvers, DivergenceIsReported) {
  ExactOracle oracle(
      1, [](std::span<const double> x) { return x[0] * x[0]; },
      [](std::span<const double> x) { return std::vector<double>{2 * x[0]}; });
  RunOptions opts;
  opts.divergence_margin = 10.0;
  const std::vector<double> x0{1.0};
  const auto t = sgd_run(oracle, 2.0, 2, x0, opts);
  EXPECT_EQ(t.status, RunStatus::Diverged);
  EXPECT_FALSE(t.diagnostic.empty());
  EXPECT_LT(t.records.size(), 10u);
}

TEST(Solvers, NonFiniteIsReported) {
  ExactOracle oracle(
      1, [](std::span<const double> x) { return x[0] * x[0]; },
      [](std::span<const double>) {
        return std::vector<double>{std::numeric_limits<double>::quiet_NaN()};
      });
  const std::vector<double> x0{1.0};
  const auto t = adam_run(oracle, 0.1, AdamConfig{}, x0, {});
  EXPECT_EQ(t.status, RunStatus::NonFinite);
  EXPECT_NE(t.diagnostic.find("non-finite"), std::string::npos);
  const auto s = shoals_run(oracle, ShoalsConfig{}, ShoalsPriors{}, x0, {});
  EXPECT_EQ(s.status, RunStatus::NonFinite);
}

TEST(Solvers, BudgetExhaustion) {
  const auto p = load_bundled_problem("toy-2q");
  Rng rng(4);
  RunOptions opts;
  opts.budget.max_seconds = 30.0;
  opts.stop_at_threshold = false;
  const std::vector<double> theta0{2.5, -2.5};
  const auto t = run_solver(p, {"adam", AdamConfig{}}, rng, theta0, opts);
  EXPECT_EQ(t.status, RunStatus::BudgetExhausted);
  // The run stops at the first record at or past the budget.
  const auto& d = opts.device;
  EXPECT_GE(d.wall_clock(t.final_ledger()), 30.0);
  EXPECT_LT(d.wall_clock(t.records[t.records.size() - 2].ledger), 30.0);
}

TEST(Solvers, SampleCapLogsTruncation) {
  const auto p = load_bundled_problem("toy-2q");
  Rng rng(4);
  RunOptions opts;
  opts.sample_cap = 50;
  opts.budget.max_iterations = 3;
  const std::vector<double> theta0{0.1, 0.1};
  const auto t = run_solver(p, {"shoals", ShoalsConfig{}}, rng, theta0, opts);
  EXPECT_FALSE(t.events.empty());
  for (const auto& r : t.records) {
    EXPECT_LE(r.n_f, 50u);
    for (auto n : r.n_g) EXPECT_LE(n, 50u);
  }
}

}  // namespace
}  // namespace shoals
