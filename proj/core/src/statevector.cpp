#include "shoals/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "text_util.hpp"

namespace shoals {

namespace {

constexpr std::size_t kMaxStateQubits = 26;

std::complex<double> i_power(unsigned k) {
  switch (k % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

AnsatzCircuit::AnsatzCircuit(std::size_t qubit_count, std::size_t parameter_count,
                             std::vector<std::size_t> prep_flips,
                             std::vector<RotationGate> gates)
    : qubit_count_(qubit_count),
      parameter_count_(parameter_count),
      prep_flips_(std::move(prep_flips)),
      gates_(std::move(gates)) {
  if (qubit_count_ == 0 || qubit_count_ > kMaxStateQubits) {
    throw std::invalid_argument("ansatz qubit count must be in [1, " +
                                std::to_string(kMaxStateQubits) + "]");
  }
  if (parameter_count_ == 0) throw std::invalid_argument("ansatz needs at least one parameter");
  for (std::size_t q : prep_flips_) {
    if (q >= qubit_count_) throw std::invalid_argument("flip qubit " + std::to_string(q) + " out of range");
  }
  std::vector<int> uses(parameter_count_, 0);
  for (const auto& g : gates_) {
    if (g.parameter >= parameter_count_) {
      throw std::invalid_argument("gate parameter index " + std::to_string(g.parameter) + " out of range");
    }
    if (g.generator.qubit_count() != qubit_count_) {
      throw std::invalid_argument("gate generator " + g.generator.str() + " has wrong qubit count");
    }
    if (g.generator.is_identity()) {
      throw std::invalid_argument("gate generator must not be the identity");
    }
    ++uses[g.parameter];
  }
  for (std::size_t i = 0; i < parameter_count_; ++i) {
    if (uses[i] != 1) {
      throw std::invalid_argument("parameter " + std::to_string(i) + " drives " +
                                  std::to_string(uses[i]) + " gates; exactly one is required");
    }
  }
}

AnsatzCircuit parse_ansatz(std::string_view source) {
  std::size_t qubits = 0;
  std::size_t params = 0;
  std::vector<std::size_t> flips;
  std::vector<RotationGate> gates;
  std::size_t last_line = 0;
  detail::for_each_line(source, [&](std::size_t line_no, std::string_view line) {
    last_line = line_no;
    auto fields = detail::split_ws(line);
    if (fields.empty()) return;
    if (qubits == 0) {
      qubits = detail::parse_header_count(line_no, line, "qubits");
      return;
    }
    if (params == 0) {
      params = detail::parse_header_count(line_no, line, "params");
      return;
    }
    if (fields[0] == "flip") {
      std::size_t q = 0;
      if (fields.size() != 2 || !detail::parse_size(fields[1], q)) {
        throw ParseError(line_no, "expected 'flip <qubit>'");
      }
      if (q >= qubits) throw ParseError(line_no, "flip qubit out of range");
      flips.push_back(q);
    } else if (fields[0] == "gate") {
      std::size_t index = 0;
      if (fields.size() != 3 || !detail::parse_size(fields[1], index)) {
        throw ParseError(line_no, "expected 'gate <param_index> <letters>'");
      }
      if (index >= params) throw ParseError(line_no, "parameter index out of range");
      PauliString p;
      try {
        p = PauliString::parse(fields[2]);
      } catch (const std::invalid_argument& e) {
        throw ParseError(line_no, e.what());
      }
      if (p.qubit_count() != qubits) throw ParseError(line_no, "generator length mismatch");
      if (p.is_identity()) throw ParseError(line_no, "generator must not be the identity");
      gates.push_back({index, std::move(p)});
    } else {
      throw ParseError(line_no, "unknown directive '" + std::string(fields[0]) + "'");
    }
  });
  if (qubits == 0 || params == 0) {
    throw ParseError(std::max<std::size_t>(last_line, 1), "missing 'qubits:' or 'params:' header");
  }
  try {
    return AnsatzCircuit(qubits, params, std::move(flips), std::move(gates));
  } catch (const std::invalid_argument& e) {
    throw ParseError(last_line, e.what());
  }
}

AnsatzCircuit load_ansatz(const std::string& path) {
  return parse_ansatz(detail::read_file(path));
}

StateVector::StateVector(std::size_t qubit_count)
    : qubit_count_(qubit_count), amplitudes_(std::size_t{1} << qubit_count) {
  amplitudes_[0] = 1.0;
}

double StateVector::norm() const {
  double sum = 0.0;
  for (const auto& a : amplitudes_) sum += std::norm(a);
  return std::sqrt(sum);
}

void StateVector::flip(std::size_t qubit) {
  const std::size_t bit = std::size_t{1} << (qubit_count_ - 1 - qubit);
  for (std::size_t x = 0; x < amplitudes_.size(); ++x) {
    if ((x & bit) == 0) std::swap(amplitudes_[x], amplitudes_[x | bit]);
  }
}

void StateVector::apply_rotation(const PauliString& generator, double angle) {
  if (generator.qubit_count() != qubit_count_) {
    throw std::invalid_argument("generator qubit count mismatch");
  }
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  const Amplitude base = i_power(generator.y_count());
  const std::uint64_t flip = generator.flip_mask();
  const std::uint64_t phase_mask = generator.phase_mask();
  // -i * s * phase(x), with P|x> = phase(x) |x ^ flip>.
  auto weight = [&](std::uint64_t x) {
    const bool odd = std::popcount(x & phase_mask) & 1;
    return Amplitude(0.0, -s) * (odd ? -base : base);
  };
  if (flip == 0) {
    for (std::uint64_t x = 0; x < amplitudes_.size(); ++x) {
      amplitudes_[x] *= c + weight(x);
    }
    return;
  }
  for (std::uint64_t x = 0; x < amplitudes_.size(); ++x) {
    const std::uint64_t y = x ^ flip;
    if (y < x) continue;
    const Amplitude a = amplitudes_[x];
    const Amplitude b = amplitudes_[y];
    amplitudes_[x] = c * a + weight(y) * b;
    amplitudes_[y] = c * b + weight(x) * a;
  }
}

double StateVector::expectation(const PauliString& p) const {
  if (p.qubit_count() != qubit_count_) {
    throw std::invalid_argument("Pauli string qubit count mismatch");
  }
  const Amplitude base = i_power(p.y_count());
  Amplitude sum = 0.0;
  for (std::uint64_t x = 0; x < amplitudes_.size(); ++x) {
    const bool odd = std::popcount(x & p.phase_mask()) & 1;
    sum += std::conj(amplitudes_[x ^ p.flip_mask()]) * (odd ? -base : base) * amplitudes_[x];
  }
  if (std::abs(sum.imag()) > 1e-10) {
    throw std::logic_error("expectation of a Hermitian operator has imaginary part " +
                           std::to_string(sum.imag()));
  }
  return sum.real();
}

StateVector prepare_state(const AnsatzCircuit& circuit, std::span<const double> theta) {
  if (theta.size() != circuit.parameter_count()) {
    throw std::invalid_argument("theta has " + std::to_string(theta.size()) +
                                " entries, ansatz expects " +
                                std::to_string(circuit.parameter_count()));
  }
  for (double t : theta) {
    if (!std::isfinite(t)) throw std::invalid_argument("theta must be finite");
  }
  StateVector state(circuit.qubit_count());
  for (std::size_t q : circuit.prep_flips()) state.flip(q);
  for (const auto& g : circuit.gates()) state.apply_rotation(g.generator, theta[g.parameter]);
  return state;
}

double expectation(const StateVector& state, const PauliString& p) {
  return state.expectation(p);
}

int pauli_outcome(double expectation, double u) noexcept {
  const double p_plus = std::clamp(0.5 * (1.0 + expectation), 0.0, 1.0);
  return u < p_plus ? 1 : -1;
}

int sample_pauli(const StateVector& state, const PauliString& p, Rng& rng) {
  return pauli_outcome(state.expectation(p), rng.uniform());
}

}  // namespace shoals
