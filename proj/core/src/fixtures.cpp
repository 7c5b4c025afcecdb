#include "shoals/fixtures.hpp"

#include <stdexcept>

namespace shoals {

namespace {

constexpr std::string_view kToy1qHamiltonian = R"(qubits: 1
1.0 Z
)";

constexpr std::string_view kToy1qAnsatz = R"(qubits: 1
params: 1
gate 0 Y
)";

constexpr std::string_view kToy2qHamiltonian = R"(qubits: 2
0.5 ZI
0.25 XX
)";

constexpr std::string_view kToy2qAnsatz = R"(qubits: 2
params: 2
gate 0 YI
gate 1 XY
)";

constexpr std::string_view kH2Hamiltonian = R"(# H2, 0.74 A, STO-3G, parity mapping with two-qubit reduction
qubits: 2
-1.052373245772859 II
0.39793742484318045 IZ
-0.39793742484318045 ZI
-0.01128010425623538 ZZ
0.18093119978423156 XX
)";

constexpr std::string_view kH2Ansatz = R"(qubits: 2
params: 3
flip 1
gate 0 IY
gate 1 YI
gate 2 XY
)";

}  // namespace

const std::vector<BundledProblem>& bundled_problems() {
  static const std::vector<BundledProblem> problems = {
      {"toy-1q", "H = Z, Ry ansatz", kToy1qHamiltonian, kToy1qAnsatz},
      {"toy-2q", "H = 0.5 ZI + 0.25 XX, Ry + XY ansatz", kToy2qHamiltonian, kToy2qAnsatz},
      {"h2", "H2 (2 qubits, parity reduced), 3-parameter rotation ansatz", kH2Hamiltonian,
       kH2Ansatz},
  };
  return problems;
}

Problem load_bundled_problem(std::string_view name) {
  for (const auto& p : bundled_problems()) {
    if (p.name != name) continue;
    auto h = parse_hamiltonian(p.hamiltonian_text);
    auto a = parse_ansatz(p.ansatz_text);
    if (name == "h2") return Problem(std::string(name), std::move(h), std::move(a), 5, 40);
    return Problem(std::string(name), std::move(h), std::move(a));
  }
  throw std::invalid_argument("unknown bundled problem '" + std::string(name) + "'");
}

}  // namespace shoals
