#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "shoals/ledger.hpp"

namespace shoals {

/// Inputs of the worst-case cost comparison. All big-O constants are taken
/// as 1, so outputs are order-of-magnitude predictors rather than forecasts.
struct CostInputs {
  std::size_t n = 1;        // parameter count
  std::size_t t_f = 1;      // circuits per single-shot f
  std::size_t t_g = 2;      // circuits per single-shot gradient
  double lipschitz = 1.0;   // L_g >= 1
  double f_gap = 1.0;       // f(theta^0) - f(theta^*)
  double eps = 0.04;        // target stationarity, in (0, 1)
  std::uint64_t batch = 1;  // SG batch size
  DeviceModel device = DeviceModel::superconducting();
};

struct WorstCaseCost {
  double iterations = 0.0;
  double per_iter_latency = 0.0;  // seconds
  double per_iter_shots = 0.0;    // seconds
  double total = 0.0;             // seconds

  double per_iteration() const noexcept { return per_iter_latency + per_iter_shots; }
};

// iterations = L^2 gap / eps^2; latency = c2 (2 t_f + t_g) + 2 c3;
// shots = c1 (t_g / eps^2 + 2 t_f / eps^4).
WorstCaseCost shoals_worst_case_cost(const CostInputs& in);

// Same total expanded into its eps^-2, eps^-4 and eps^-6 terms.
double shoals_worst_case_total_expanded(const CostInputs& in);

// iterations = L gap / eps^4; latency = c2 t_g + c3; shots = b c1 t_g.
WorstCaseCost sg_worst_case_cost(const CostInputs& in);

// Shot time below which SHOALS is predicted cheaper than SG, assuming
// t_g = 2 n t_f and b = 1: eps^2 (2 n t_f c2 + c3) / (2 t_f L).
double breakeven_c1(std::size_t n, std::size_t t_f, double c2, double c3, double lipschitz,
                    double eps_sq);

// c1' shots + c2' switches + c3' communications.
double reprice(const CostLedger& ledger, const DeviceModel& device);

// ---------------------------------------------------------------------------
// c1/c2 sweeps over recorded ledgers.

/// Ledger at the moment a run first reached the accuracy threshold, or
/// nothing when it never did.
using ReachLedger = std::optional<CostLedger>;

struct SweepRow {
  double ratio = 0.0;  // c1 / c2
  double q25 = 0.0;
  double q50 = 0.0;
  double q75 = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  // c1/c2 where the median ratio crosses 1, by log-linear interpolation.
  std::optional<double> crossing;
};

// Device used for sweep point `ratio`: c2 = 1, c1 = ratio, c3 = 0.
DeviceModel sweep_device(double ratio);

// Per-seed wall-clock ratio a/b. Unreached runs price as +infinity; a pair in
// which neither run reached is +infinity as well.
double time_ratio(const ReachLedger& a, const ReachLedger& b, const DeviceModel& device);

// Re-prices paired ledgers (index = seed) at every ratio and reports the
// 25/50/75 percentiles of the per-seed time ratio. Throws on an empty or
// non-positive grid.
SweepResult sweep_ratio(std::span<const ReachLedger> solver_a, std::span<const ReachLedger> solver_b,
                        std::span<const double> ratios);

// Log-linear interpolation of where `medians` crosses 1 along `ratios`.
std::optional<double> median_crossing(std::span<const double> ratios,
                                      std::span<const double> medians);

}  // namespace shoals
