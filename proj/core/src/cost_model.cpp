#include "shoals/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "shoals/quantiles.hpp"

namespace shoals {

namespace {

void check_inputs(const CostInputs& in) {
  if (!(in.eps > 0.0 && in.eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
  if (in.n == 0 || in.t_f == 0 || in.t_g == 0) {
    throw std::invalid_argument("n, t_f and t_g must be positive");
  }
  if (!(in.lipschitz >= 1.0)) throw std::invalid_argument("L_g must be >= 1");
  if (!(in.f_gap >= 0.0)) throw std::invalid_argument("f_gap must be nonnegative");
  in.device.validate();
}

}  // namespace

WorstCaseCost shoals_worst_case_cost(const CostInputs& in) {
  check_inputs(in);
  const auto& d = in.device;
  const double eps2 = in.eps * in.eps;
  const double tf = static_cast<double>(in.t_f);
  const double tg = static_cast<double>(in.t_g);
  WorstCaseCost out;
  out.iterations = in.lipschitz * in.lipschitz * in.f_gap / eps2;
  out.per_iter_latency = d.switch_seconds * (2.0 * tf + tg) + 2.0 * d.communication_seconds;
  out.per_iter_shots = d.shot_seconds * (tg / eps2 + 2.0 * tf / (eps2 * eps2));
  out.total = out.iterations * out.per_iteration();
  return out;
}

double shoals_worst_case_total_expanded(const CostInputs& in) {
  check_inputs(in);
  const auto& d = in.device;
  const double scale = in.lipschitz * in.lipschitz * in.f_gap;
  const double eps2 = in.eps * in.eps;
  const double tf = static_cast<double>(in.t_f);
  const double tg = static_cast<double>(in.t_g);
  const double latency = d.switch_seconds * (2.0 * tf + tg) + 2.0 * d.communication_seconds;
  return scale * latency / eps2 + scale * d.shot_seconds * tg / (eps2 * eps2) +
         2.0 * d.shot_seconds * tf * scale / (eps2 * eps2 * eps2);
}

WorstCaseCost sg_worst_case_cost(const CostInputs& in) {
  check_inputs(in);
  if (in.batch == 0) throw std::invalid_argument("batch size must be positive");
  const auto& d = in.device;
  const double eps2 = in.eps * in.eps;
  const double tg = static_cast<double>(in.t_g);
  WorstCaseCost out;
  out.iterations = in.lipschitz * in.f_gap / (eps2 * eps2);
  out.per_iter_latency = d.switch_seconds * tg + d.communication_seconds;
  out.per_iter_shots = static_cast<double>(in.batch) * d.shot_seconds * tg;
  out.total = out.iterations * out.per_iteration();
  return out;
}

double breakeven_c1(std::size_t n, std::size_t t_f, double c2, double c3, double lipschitz,
                    double eps_sq) {
  if (!(lipschitz >= 1.0)) throw std::invalid_argument("L_g must be >= 1");
  if (t_f == 0) throw std::invalid_argument("t_f must be positive");
  const double tf = static_cast<double>(t_f);
  return eps_sq * (2.0 * static_cast<double>(n) * tf * c2 + c3) / (2.0 * tf * lipschitz);
}

double reprice(const CostLedger& ledger, const DeviceModel& device) {
  return device.wall_clock(ledger);
}

DeviceModel sweep_device(double ratio) {
  if (!(ratio > 0.0) || !std::isfinite(ratio)) {
    throw std::invalid_argument("c1/c2 ratios must be positive and finite");
  }
  return {ratio, 1.0, 0.0};
}

double time_ratio(const ReachLedger& a, const ReachLedger& b, const DeviceModel& device) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  if (!a) return kInf;
  if (!b) return 0.0;
  const double ta = reprice(*a, device);
  const double tb = reprice(*b, device);
  if (ta == tb) return 1.0;
  return tb > 0.0 ? ta / tb : kInf;
}

std::optional<double> median_crossing(std::span<const double> ratios,
                                      std::span<const double> medians) {
  if (ratios.size() != medians.size()) throw std::invalid_argument("length mismatch");
  std::vector<std::size_t> order(ratios.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return ratios[i] < ratios[j]; });
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    const double r0 = ratios[order[k]];
    const double r1 = ratios[order[k + 1]];
    const double m0 = medians[order[k]];
    const double m1 = medians[order[k + 1]];
    if (m0 == 1.0) return r0;
    if (!std::isfinite(m0) || !std::isfinite(m1)) continue;
    if ((m0 - 1.0) * (m1 - 1.0) < 0.0) {
      const double t = (1.0 - m0) / (m1 - m0);
      return std::pow(10.0, std::log10(r0) + t * (std::log10(r1) - std::log10(r0)));
    }
  }
  if (!order.empty() && medians[order.back()] == 1.0) return ratios[order.back()];
  return std::nullopt;
}

SweepResult sweep_ratio(std::span<const ReachLedger> solver_a,
                        std::span<const ReachLedger> solver_b, std::span<const double> ratios) {
  if (ratios.empty()) throw std::invalid_argument("empty c1/c2 grid");
  if (solver_a.size() != solver_b.size() || solver_a.empty()) {
    throw std::invalid_argument("sweep needs one paired run per seed for both solvers");
  }
  SweepResult out;
  std::vector<double> per_seed(solver_a.size());
  std::vector<double> medians;
  for (double ratio : ratios) {
    const DeviceModel device = sweep_device(ratio);
    for (std::size_t s = 0; s < per_seed.size(); ++s) {
      per_seed[s] = time_ratio(solver_a[s], solver_b[s], device);
    }
    out.rows.push_back({ratio, quantile(per_seed, 0.25), quantile(per_seed, 0.5),
                        quantile(per_seed, 0.75)});
    medians.push_back(out.rows.back().q50);
  }
  out.crossing = median_crossing(ratios, medians);
  return out;
}

}  // namespace shoals
