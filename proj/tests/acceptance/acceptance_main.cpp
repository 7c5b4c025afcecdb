// Acceptance gate: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "audit.hpp"
#include "campaign/campaign.hpp"
#include "oracles.hpp"
#include "shoals/shoals.hpp"

namespace {

using namespace shoals;
namespace fs = std::filesystem;

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void check(const char* name, double time_limit_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = elapsed < time_limit_s;
  const bool pass = out.pass && in_time;
  failures += pass ? 0 : 1;
  std::printf("%s  %-34s %s; %.2f s (limit %.0f s)%s\n", pass ? "PASS" : "FAIL", name,
              out.detail.c_str(), elapsed, time_limit_s, in_time ? "" : " [too slow]");
  std::fflush(stdout);
}

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Outcome parameter_shift() {
  Rng rng(101);
  double worst = 0.0;
  int points = 0;
  for (const char* name : {"toy-1q", "toy-2q"}) {
    const auto p = load_bundled_problem(name);
    const auto f = [&](std::span<const double> t) { return exact_objective(p, t); };
    for (int k = 0; k < 100; ++k, ++points) {
      const auto theta = random_initial_point(p.parameter_count(), rng);
      const auto g = exact_gradient(p, theta);
      const auto fd = oracle::central_difference(f, theta, 1e-5);
      for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(g[i] - fd[i]));
    }
  }
  return {worst <= 1e-6, fmt("%d points, max |shift - FD| = %.2e (tol 1e-6)", points, worst)};
}

Outcome estimator_statistics() {
  const auto p = load_bundled_problem("toy-1q");
  Rng rng(202);
  CostLedger ledger;
  const std::vector<double> half{kPi / 2};
  const auto e = estimate_f(p, half, 100000, rng, ledger);
  const double rel = std::abs(e.sample_variance - 1.0);
  return {std::abs(e.mean) <= 0.0127 && rel <= 0.05,
          fmt("mean %.5f (|.| <= 0.0127), variance %.5f (within 5%% of 1)", e.mean,
              e.sample_variance)};
}

Outcome condition_two() {
  const auto p = load_bundled_problem("toy-1q");
  const std::vector<double> half{kPi / 2};
  const double eps_f = kChemicalAccuracy;
  const SingleShotSampler sampler(p.hamiltonian(), prepare_state(p.ansatz(), half));
  const double v = sampler.exact_variance();
  const auto n = ceil_to_count(v / (eps_f * eps_f));
  Rng rng(303);
  double total = 0.0;
  const int reps = 1000;
  for (int r = 0; r < reps; ++r) total += std::abs(sample_f(p, half, n, rng).mean - 0.0);
  const double mean_err = total / reps;
  return {n == 390625 && mean_err <= 1.25 * eps_f,
          fmt("N = %llu, mean |error| = %.3e (<= %.3e)", static_cast<unsigned long long>(n),
              mean_err, 1.25 * eps_f)};
}

Outcome condition_one() {
  const auto p = load_bundled_problem("toy-2q");
  const std::vector<double> theta{0.9, -0.4};
  const auto exact = exact_gradient(p, theta);
  std::vector<double> var(exact.size());
  for (std::size_t i = 0; i < var.size(); ++i) var[i] = single_shot_partial_variance(p, theta, i);
  const double prob = 0.1, eps_g = 0.04, L = lipschitz_bound(p);
  const int reps = 1000;
  const double floor = 1 - prob - 3 * std::sqrt(prob * (1 - prob) / reps);
  Rng rng(404);
  bool ok = true;
  std::string detail;
  // alpha = 1 exercises the L alpha |g| branch, alpha = 0.01 the eps_g branch.
  for (double alpha : {1.0, 0.01}) {
    const auto counts = gradient_sample_sizes(var, alpha, exact, L, prob, eps_g);
    int hits = 0;
    for (int r = 0; r < reps; ++r) {
      const auto g = sample_grad(p, theta, counts, rng);
      double err = 0.0;
      for (std::size_t i = 0; i < exact.size(); ++i) {
        err = std::max(err, std::abs(g.values[i] - exact[i]));
      }
      hits += err <= std::max(eps_g, L * alpha * std::sqrt(g.norm_squared())) ? 1 : 0;
    }
    const double rate = static_cast<double>(hits) / reps;
    ok &= rate >= floor;
    detail += fmt("%salpha %g: rate %.3f with N_g = (%llu, %llu)", detail.empty() ? "" : ", ", alpha,
                  rate, static_cast<unsigned long long>(counts[0]),
                  static_cast<unsigned long long>(counts[1]));
  }
  return {ok, detail + fmt(", %d reps each (>= %.4f)", reps, floor)};
}

Outcome shoals_dynamics() {
  const ShoalsConfig cfg;
  std::size_t audited = 0, rejects = 0, grows = 0, capped = 0;
  std::vector<std::string> issues;
  for (const char* name : {"toy-1q", "toy-2q", "h2"}) {
    const auto p = load_bundled_problem(name);
    for (std::uint32_t seed = 0; seed < 10; ++seed) {
      Rng init{2022u, seed, 0u}, shots{2022u, seed, 1u};
      const auto theta0 = random_initial_point(p.parameter_count(), init);
      RunOptions opts;
      opts.stop_at_threshold = false;
      opts.budget.max_iterations = 60;
      const auto t = run_solver(p, {"shoals", cfg}, shots, theta0, opts);
      for (const auto& s : audit::shoals_dynamics(t, cfg)) issues.push_back(std::string(name) + " " + s);
      for (std::size_t k = 1; k < t.records.size(); ++k) {
        const auto& r = t.records[k];
        ++audited;
        rejects += r.accepted ? 0 : 1;
        grows += r.accepted && r.alpha_next > r.alpha ? 1 : 0;
        capped += r.accepted && r.alpha == cfg.alpha_max ? 1 : 0;
      }
    }
  }
  // Every branch of the update must actually have been exercised.
  const bool covered = rejects > 0 && grows > 0 && capped > 0;
  std::string detail = fmt("%zu iterations audited (%zu rejects, %zu growths, %zu at cap), %zu violations",
                           audited, rejects, grows, capped, issues.size());
  if (!issues.empty()) detail += "; first: " + issues.front();
  return {issues.empty() && covered, detail};
}

Outcome convergence() {
  std::string detail;
  bool ok = true;
  for (const char* name : {"toy-1q", "toy-2q"}) {
    campaign::CampaignConfig cfg;
    cfg.problem.name = name;
    cfg.problem.bundled = name;
    cfg.solvers = {{"shoals", ShoalsConfig{}}, {"adam-100", AdamConfig{}}, {"icans1", IcansConfig{}}};
    for (std::uint32_t s = 0; s < 10; ++s) cfg.seeds.push_back(s);
    cfg.master_seed = 2022;
    cfg.budget = {1.0e4, 100000};
    cfg.device = DeviceModel::superconducting();
    cfg.jobs = 4;
    const auto problem = campaign::resolve_problem(cfg.problem);
    const auto results = campaign::run_campaign(problem, cfg, cfg.solvers);
    for (const auto& solver : cfg.solvers) {
      int reached = 0;
      for (const auto& r : results) {
        if (r.solver == solver.name && r.trajectory.reached) ++reached;
      }
      ok &= reached >= 9;
      detail += fmt("%s%s/%s %d/10", detail.empty() ? "" : ", ", name, solver.name.c_str(), reached);
    }
  }
  return {ok, detail};
}

Outcome cost_model() {
  CostInputs in;
  in.n = 3;
  in.t_f = 5;
  in.t_g = 40;
  in.batch = 100;
  const double shoals_latency = shoals_worst_case_cost(in).per_iter_latency;
  const double sg_latency = sg_worst_case_cost(in).per_iter_latency;
  const double breakeven = breakeven_c1(3, 5, 0.1, 4.0, 1.0, 0.0016);
  return {shoals_latency == 13.0 && sg_latency == 8.0 && breakeven == 0.00112,
          fmt("SHOALS latency %g s, SG latency %g s, breakeven c1 %g s (exact double compare)", shoals_latency,
              sg_latency, breakeven)};
}

Outcome latency_tradeoff() {
  campaign::CampaignConfig cfg;
  cfg.problem.name = "toy-2q";
  cfg.problem.bundled = "toy-2q";
  cfg.solvers = {{"shoals", ShoalsConfig{}}, {"adam-100", AdamConfig{}}};
  for (std::uint32_t s = 0; s < 20; ++s) cfg.seeds.push_back(s);
  cfg.master_seed = 2022;
  cfg.budget = {1.0e4, 100000};
  cfg.jobs = 4;
  const std::vector<double> ratios{1e-6, 1e-4, 1e-2, 1e0, 1e2};
  const auto r = campaign::run_sweep(campaign::resolve_problem(cfg.problem), cfg, ratios);
  const double low = r.rows.front().q50;
  const double high = r.rows.back().q50;
  return {low < 1.0 && high > 1.0,
          fmt("20 seeds, median SHOALS/Adam-100 ratio %.3f at 1e-6, %.3f at 1e2, crossing %s", low,
              high, r.crossing ? campaign::format_double(*r.crossing).c_str() : "none")};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const auto root = fs::temp_directory_path() / "shoals-acceptance-determinism";
  fs::remove_all(root);
  campaign::CampaignConfig cfg;
  cfg.problem.name = "toy-2q";
  cfg.problem.bundled = "toy-2q";
  cfg.solvers = {{"shoals", ShoalsConfig{}}, {"adam-100", AdamConfig{}}, {"icans1", IcansConfig{}}};
  for (std::uint32_t s = 0; s < 5; ++s) cfg.seeds.push_back(s);
  cfg.master_seed = 99;
  const auto problem = campaign::resolve_problem(cfg.problem);
  const double f_star = exact_ground_energy(problem.hamiltonian());
  for (unsigned jobs : {1u, 4u}) {
    cfg.jobs = jobs;
    const auto results = campaign::run_campaign(problem, cfg, cfg.solvers);
    campaign::write_outputs(root / std::to_string(jobs), campaign::summarize(problem, f_star, cfg, results),
                            results);
  }
  std::size_t files = 0, differing = 0;
  for (const auto& entry : fs::directory_iterator(root / "1" / "trajectories")) {
    ++files;
    if (slurp(entry.path()) != slurp(root / "4" / "trajectories" / entry.path().filename())) ++differing;
  }
  const bool summary_same = slurp(root / "1" / "summary.json") == slurp(root / "4" / "summary.json");
  fs::remove_all(root);
  return {files == 15 && differing == 0 && summary_same,
          fmt("%zu trajectory files compared, %zu differ, summary %s", files, differing,
              summary_same ? "identical" : "differs")};
}

}  // namespace

int main() {
  check("parameter-shift exactness", 1, parameter_shift);
  check("estimator statistics", 5, estimator_statistics);
  check("condition 2 (function accuracy)", 120, condition_two);
  check("condition 1 (gradient accuracy)", 120, condition_one);
  check("SHOALS step-size dynamics", 120, shoals_dynamics);
  check("convergence on toy problems", 600, convergence);
  check("cost-model arithmetic", 1, cost_model);
  check("latency trade-off direction", 900, latency_tradeoff);
  check("determinism", 120, determinism);
  std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
