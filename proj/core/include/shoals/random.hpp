#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace shoals {

/// Seedable random stream owned by exactly one run. uniform() is computed
/// from the raw 64-bit engine output so draws do not depend on the standard
/// library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::initializer_list<std::uint32_t> seeds) {
    std::seed_seq seq(seeds);
    engine_.seed(seq);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace shoals
