#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace shoals {

/// Metered device usage for one run. Counters only grow.
struct CostLedger {
  std::uint64_t shots = 0;
  std::uint64_t switches = 0;
  std::uint64_t communications = 0;

  // One optimizer<->device exchange executing `distinct_circuits` circuits for
  // `total_shots` shots. Each distinct circuit is one switch, whatever its
  // shot count.
  void batch_request(std::uint64_t distinct_circuits, std::uint64_t total_shots) {
    communications += 1;
    switches += distinct_circuits;
    shots += total_shots;
  }

  friend bool operator==(const CostLedger&, const CostLedger&) = default;
};

/// Seconds charged per metered event.
struct DeviceModel {
  double shot_seconds = 0.0;
  double switch_seconds = 0.0;
  double communication_seconds = 0.0;

  // Forward-looking superconducting hardware: 1e-5 s/shot, 0.1 s/switch,
  // 4 s/communication.
  static constexpr DeviceModel superconducting() { return {1.0e-5, 0.1, 4.0}; }

  void validate() const {
    for (double v : {shot_seconds, switch_seconds, communication_seconds}) {
      if (!std::isfinite(v) || v < 0.0) {
        throw std::invalid_argument("device times must be finite and nonnegative");
      }
    }
  }

  double wall_clock(const CostLedger& ledger) const {
    return shot_seconds * static_cast<double>(ledger.shots) +
           switch_seconds * static_cast<double>(ledger.switches) +
           communication_seconds * static_cast<double>(ledger.communications);
  }

  friend bool operator==(const DeviceModel&, const DeviceModel&) = default;
};

}  // namespace shoals
