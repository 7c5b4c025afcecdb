#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "shoals/problem.hpp"

namespace shoals {

struct BundledProblem {
  std::string_view name;
  std::string_view description;
  std::string_view hamiltonian_text;
  std::string_view ansatz_text;
};

// toy-1q: H = Z with a single Ry rotation (f = cos theta, f* = -1).
// toy-2q: H = 0.5 ZI + 0.25 XX with an Ry rotation and an XY entangler.
// h2:     two-qubit parity-reduced H2 at 0.74 Angstrom (electronic energy,
//         Hartree), three rotations; circuit counts pinned to n=3, t_f=5,
//         t_g=40 to match published problem statistics.
const std::vector<BundledProblem>& bundled_problems();

// Throws std::invalid_argument for unknown names.
Problem load_bundled_problem(std::string_view name);

}  // namespace shoals
