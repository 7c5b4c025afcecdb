#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "shoals/pauli.hpp"

namespace shoals {
namespace {

TEST(PauliString, ParsesLettersAndMasks) {
  const auto p = PauliString::parse("XYZI");
  EXPECT_EQ(p.qubit_count(), 4u);
  EXPECT_EQ(p.str(), "XYZI");
  // Qubit 0 is the most significant bit.
  EXPECT_EQ(p.flip_mask(), 0b1100u);
  EXPECT_EQ(p.phase_mask(), 0b0110u);
  EXPECT_EQ(p.y_count(), 1u);
  EXPECT_FALSE(p.is_identity());
  EXPECT_TRUE(PauliString::parse("II").is_identity());
  EXPECT_THROW(PauliString::parse("XQ"), std::invalid_argument);
  EXPECT_THROW(PauliString::parse(""), std::invalid_argument);
}

TEST(Hamiltonian, ParseSingleTerm) {
  const auto h = parse_hamiltonian("qubits: 1\n1.0 Z\n");
  EXPECT_EQ(h.qubit_count(), 1u);
  ASSERT_EQ(h.terms().size(), 1u);
  EXPECT_DOUBLE_EQ(h.error_bound(), 2.0);
}

TEST(Hamiltonian, ParseTwoTerms) {
  const auto h = parse_hamiltonian("# toy\nqubits: 2\n0.5 ZI\n0.25 XX  # entangling\n");
  ASSERT_EQ(h.terms().size(), 2u);
  EXPECT_DOUBLE_EQ(h.error_bound(), 1.5);
  EXPECT_EQ(h.terms()[1].pauli.str(), "XX");
  EXPECT_DOUBLE_EQ(h.single_shot_variance_bound(), 0.3125);
}

TEST(Hamiltonian, LengthMismatchReportsLine) {
  try {
    parse_hamiltonian("qubits: 2\n0.5 ZIX\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Hamiltonian, RejectsMalformedInput) {
  EXPECT_THROW(parse_hamiltonian("qubits: 1\n1.0 Q\n"), ParseError);
  EXPECT_THROW(parse_hamiltonian("qubits: 1\nnan Z\n"), ParseError);
  EXPECT_THROW(parse_hamiltonian("qubits: 1\ninf Z\n"), ParseError);
  EXPECT_THROW(parse_hamiltonian("qubits: 1\n1.0\n"), ParseError);
  EXPECT_THROW(parse_hamiltonian("1.0 Z\n"), ParseError);
  EXPECT_THROW(parse_hamiltonian(""), ParseError);
}

TEST(Hamiltonian, IdentityTermsAreNotMeasured) {
  const auto h = parse_hamiltonian("qubits: 2\n-1.0 II\n2.0 ZI\n-1.5 XX\n");
  EXPECT_EQ(h.measured_term_count(), 2u);
  EXPECT_DOUBLE_EQ(h.constant_offset(), -1.0);
  EXPECT_DOUBLE_EQ(h.abs_coefficient_sum(), 3.5);
  EXPECT_DOUBLE_EQ(h.error_bound(), 9.0);
}

TEST(Hamiltonian, SerializeRoundTrip) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  std::vector<PauliTerm> terms;
  const char* strings[] = {"IZX", "YYI", "ZZZ", "XIY"};
  for (const char* s : strings) terms.push_back({coef(gen), PauliString::parse(s)});
  const Hamiltonian h(3, terms);
  const auto back = parse_hamiltonian(serialize_hamiltonian(h));
  ASSERT_EQ(back.terms().size(), h.terms().size());
  for (std::size_t j = 0; j < terms.size(); ++j) {
    EXPECT_EQ(back.terms()[j].pauli, h.terms()[j].pauli);
    const double a = h.terms()[j].coefficient;
    EXPECT_NEAR(back.terms()[j].coefficient, a, std::abs(a) * 1e-15);
  }
}

TEST(DenseMatrix, SingleQubit) {
  const auto z = dense_matrix(parse_hamiltonian("qubits: 1\n1.0 Z\n"));
  Eigen::MatrixXcd expected(2, 2);
  expected << 1, 0, 0, -1;
  EXPECT_EQ((z - expected).norm(), 0.0);
  const auto id = dense_matrix(parse_hamiltonian("qubits: 1\n1.0 I\n"));
  EXPECT_EQ((id - Eigen::MatrixXcd::Identity(2, 2)).norm(), 0.0);
}

TEST(DenseMatrix, MatchesKroneckerOracle) {
  const auto h = parse_hamiltonian("qubits: 2\n0.5 ZI\n0.25 XX\n");
  EXPECT_LT((dense_matrix(h) - oracle::hamiltonian_matrix(h)).norm(), 1e-15);
  // Every three-qubit string, including Y phases.
  const char letters[] = {'I', 'X', 'Y', 'Z'};
  for (int code = 0; code < 64; ++code) {
    std::string s{letters[code & 3], letters[(code >> 2) & 3], letters[(code >> 4) & 3]};
    const auto p = PauliString::parse(s);
    EXPECT_LT((dense_matrix(p) - oracle::pauli_matrix(p)).norm(), 1e-15) << s;
  }
}

TEST(DenseMatrix, RandomHamiltonianIsHermitian) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_int_distribution<int> letter(0, 3);
  std::vector<PauliTerm> terms;
  for (int j = 0; j < 12; ++j) {
    std::vector<Pauli> ls;
    for (int q = 0; q < 4; ++q) ls.push_back(static_cast<Pauli>(letter(gen)));
    terms.push_back({coef(gen), PauliString(ls)});
  }
  const Hamiltonian h(4, terms);
  const auto m = dense_matrix(h);
  EXPECT_LT((m - m.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((m - oracle::hamiltonian_matrix(h)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(GroundEnergy, SimpleCases) {
  EXPECT_NEAR(exact_ground_energy(parse_hamiltonian("qubits: 1\n1.0 Z\n")), -1.0, 1e-14);
  EXPECT_NEAR(exact_ground_energy(parse_hamiltonian("qubits: 1\n1.0 I\n")), 1.0, 1e-14);
}

TEST(GroundEnergy, AnticommutingPairIsAnalytic) {
  // ZI and XX anticommute, so the spectrum is +-sqrt(0.5^2 + 0.25^2).
  const auto h = parse_hamiltonian("qubits: 2\n0.5 ZI\n0.25 XX\n");
  EXPECT_NEAR(exact_ground_energy(h), -std::sqrt(0.3125), 1e-12);
  EXPECT_NEAR(exact_ground_energy(h), oracle::smallest_eigenvalue(h), 1e-12);
}

TEST(GroundEnergy, DimensionGuard) {
  const auto big = parse_hamiltonian("qubits: 13\n1.0 ZIIIIIIIIIIII\n");
  EXPECT_THROW(exact_ground_energy(big), DimensionError);
  EXPECT_THROW(dense_matrix(big), DimensionError);
}

}  // namespace
}  // namespace shoals
