#pragma once

// Multi-seed solver campaigns: configuration, execution, trajectory CSVs,
// summary JSON, and c1/c2 sweeps over recorded ledgers.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "shoals/cost_model.hpp"
#include "shoals/optimizers.hpp"
#include "shoals/problem.hpp"

namespace shoals::campaign {

// Invalid configuration or arguments (CLI exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProblemSource {
  std::string name;
  std::optional<std::string> bundled;
  std::filesystem::path hamiltonian_file;
  std::filesystem::path ansatz_file;
  std::optional<std::size_t> circuits_per_f;
  std::optional<std::size_t> circuits_per_g;
  std::optional<double> f_star;
};

struct CampaignConfig {
  ProblemSource problem;
  std::vector<SolverSpec> solvers;
  std::vector<std::uint32_t> seeds;
  std::uint32_t master_seed = 0;
  RunBudget budget{1.0e4, 100000};
  DeviceModel device = DeviceModel::superconducting();
  std::filesystem::path output_dir = "shoals-out";
  double threshold = kChemicalAccuracy;
  bool stop_at_threshold = true;
  std::uint64_t sample_cap = 10'000'000;
  unsigned jobs = 1;
  // Sweep pairing (numerator / denominator); defaults to the first two solvers.
  std::optional<std::string> sweep_numerator;
  std::optional<std::string> sweep_denominator;
};

// Relative file paths are resolved against base_dir. Throws ConfigError.
CampaignConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
CampaignConfig load_config(const std::filesystem::path& path);

Problem resolve_problem(const ProblemSource& source);

struct RunResult {
  std::string solver;
  std::uint32_t seed = 0;
  std::vector<double> theta0;
  Trajectory trajectory;
};

// theta^0 for a seed; shared by every solver.
std::vector<double> initial_point(const CampaignConfig& config, std::uint32_t seed,
                                  std::size_t n);

// Runs every (solver, seed) pair on `jobs` workers. Results are ordered by
// solver, then seed, independent of scheduling.
std::vector<RunResult> run_campaign(const Problem& problem, const CampaignConfig& config,
                                    std::span<const SolverSpec> solvers);

// One row per record; columns:
// iter,exact_f,gap_to_fstar,f0_est,fs_est,grad_norm_est,alpha,accepted,n_f,
// n_g_total,shots_cum,switches_cum,comms_cum,wall_clock_s
std::string trajectory_csv(const Trajectory& trajectory);
std::string trajectory_file_name(const std::string& solver, std::uint32_t seed);

struct ReachMetrics {
  double shots = 0.0;
  double switches = 0.0;
  double communications = 0.0;
  double wall_clock_s = 0.0;
  double iterations = 0.0;
};

// Cumulative costs at the first in-budget record within threshold;
// all +infinity when the run never got there.
ReachMetrics reach_metrics(const Trajectory& trajectory);

nlohmann::json summarize(const Problem& problem, double f_star, const CampaignConfig& config,
                         std::span<const RunResult> results);

// Writes trajectories/<solver>__seed<k>.csv and summary.json under dir.
void write_outputs(const std::filesystem::path& dir, const nlohmann::json& summary,
                   std::span<const RunResult> results);

// Parses "1e-6,1e-3,1" into ratios; rejects empty lists and non-positive values.
std::vector<double> parse_ratio_list(const std::string& text);

SweepResult run_sweep(const Problem& problem, const CampaignConfig& config,
                      std::span<const double> ratios);
std::string sweep_csv(const SweepResult& result);

// Double formatting shared by the CSV writers: %.17g, "inf", "nan".
std::string format_double(double v);

}  // namespace shoals::campaign
