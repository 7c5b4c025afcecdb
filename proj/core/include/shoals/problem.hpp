#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shoals/ledger.hpp"
#include "shoals/pauli.hpp"
#include "shoals/random.hpp"
#include "shoals/statevector.hpp"

namespace shoals {

/// A VQE instance: observable, ansatz, and the circuit counts used for cost
/// accounting. circuits_per_f defaults to the number of measured terms and
/// circuits_per_g to 2 * n * circuits_per_f; both may be overridden for
/// cost-model studies.
class Problem {
 public:
  Problem(std::string name, Hamiltonian hamiltonian, AnsatzCircuit ansatz,
          std::optional<std::size_t> circuits_per_f = std::nullopt,
          std::optional<std::size_t> circuits_per_g = std::nullopt);

  const std::string& name() const noexcept { return name_; }
  const Hamiltonian& hamiltonian() const noexcept { return hamiltonian_; }
  const AnsatzCircuit& ansatz() const noexcept { return ansatz_; }
  std::size_t parameter_count() const noexcept { return ansatz_.parameter_count(); }
  std::size_t circuits_per_f() const noexcept { return circuits_per_f_; }
  std::size_t circuits_per_g() const noexcept { return circuits_per_g_; }

 private:
  std::string name_;
  Hamiltonian hamiltonian_;
  AnsatzCircuit ansatz_;
  std::size_t circuits_per_f_;
  std::size_t circuits_per_g_;
};

// Monitoring oracles. Never charged to a ledger.
double exact_objective(const Problem& problem, std::span<const double> theta);
std::vector<double> exact_gradient(const Problem& problem, std::span<const double> theta);

/// Per-term outcome distribution of one prepared state. Each draw takes one
/// +-1 observation of every measured term, one uniform per term.
class SingleShotSampler {
 public:
  SingleShotSampler(const Hamiltonian& h, const StateVector& state);

  double draw(Rng& rng) const;
  // Linear combination for given outcomes, one per measured term in order.
  double combine(std::span<const int> outcomes) const;

  double exact_mean() const noexcept;
  // sum_j a_j^2 (1 - <P_j>^2); terms are observed independently.
  double exact_variance() const noexcept;
  const std::vector<double>& expectations() const noexcept { return expectations_; }

 private:
  double offset_ = 0.0;
  std::vector<double> coefficients_;
  std::vector<double> expectations_;
  std::vector<double> plus_probability_;
};

// Single-shot estimator f(theta; xi). Charged as one request of
// circuits_per_f circuits, one shot each.
double single_shot_f(const Problem& problem, std::span<const double> theta, Rng& rng,
                     CostLedger& ledger);

// Single-shot partial derivative via the shift rule with independent draws
// at theta +- (pi/2) e_i. Charged as one request of 2 * circuits_per_f.
double single_shot_partial(const Problem& problem, std::span<const double> theta,
                           std::size_t i, Rng& rng, CostLedger& ledger);

// Analytic variance of the single-shot partial estimator for coordinate i.
double single_shot_partial_variance(const Problem& problem, std::span<const double> theta,
                                    std::size_t i);

}  // namespace shoals
