#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shoals/pauli.hpp"
#include "shoals/random.hpp"

namespace shoals {

struct RotationGate {
  std::size_t parameter = 0;
  PauliString generator;  // applied as exp(-i * theta[parameter] * generator / 2)
};

/// Reference-state bit flips followed by Pauli-rotation gates. Every
/// parameter drives exactly one gate, which keeps the two-point shift rule
/// exact.
class AnsatzCircuit {
 public:
  AnsatzCircuit(std::size_t qubit_count, std::size_t parameter_count,
                std::vector<std::size_t> prep_flips, std::vector<RotationGate> gates);

  std::size_t qubit_count() const noexcept { return qubit_count_; }
  std::size_t parameter_count() const noexcept { return parameter_count_; }
  const std::vector<std::size_t>& prep_flips() const noexcept { return prep_flips_; }
  const std::vector<RotationGate>& gates() const noexcept { return gates_; }

 private:
  std::size_t qubit_count_;
  std::size_t parameter_count_;
  std::vector<std::size_t> prep_flips_;
  std::vector<RotationGate> gates_;
};

// Text format: `qubits: <n>`, `params: <n>`, then `flip <q>` and
// `gate <param> <letters>` lines in application order. Throws ParseError.
AnsatzCircuit parse_ansatz(std::string_view source);
AnsatzCircuit load_ansatz(const std::string& path);

class StateVector {
 public:
  using Amplitude = std::complex<double>;

  // |0...0>
  explicit StateVector(std::size_t qubit_count);

  std::size_t qubit_count() const noexcept { return qubit_count_; }
  std::span<const Amplitude> amplitudes() const noexcept { return amplitudes_; }
  double norm() const;

  void flip(std::size_t qubit);
  // In place: psi <- cos(angle/2) psi - i sin(angle/2) P psi.
  void apply_rotation(const PauliString& generator, double angle);
  // Real part of <psi|P|psi>; throws if the imaginary part exceeds 1e-10.
  double expectation(const PauliString& p) const;

 private:
  std::size_t qubit_count_;
  std::vector<Amplitude> amplitudes_;
};

StateVector prepare_state(const AnsatzCircuit& circuit, std::span<const double> theta);

double expectation(const StateVector& state, const PauliString& p);

// Single +-1 outcome for an observable with the given expectation, driven by
// one uniform draw u in [0, 1): +1 iff u < (1 + expectation) / 2.
int pauli_outcome(double expectation, double u) noexcept;

// Consumes exactly one draw from rng.
int sample_pauli(const StateVector& state, const PauliString& p, Rng& rng);

}  // namespace shoals
