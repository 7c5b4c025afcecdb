#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace shoals {

// Thrown by the text loaders; carries the 1-based line of the offending input.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Thrown when a dense representation would exceed kMaxDenseQubits.
class DimensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kMaxDenseQubits = 12;

enum class Pauli : std::uint8_t { I, X, Y, Z };

/// Tensor product of single-qubit Pauli operators. Letter k acts on qubit k;
/// qubit 0 is the most significant bit of a computational-basis index, so the
/// string "ZI" is the Kronecker product Z (x) I.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::vector<Pauli> letters);

  // Throws std::invalid_argument on characters outside {I, X, Y, Z}.
  static PauliString parse(std::string_view letters);

  std::size_t qubit_count() const noexcept { return letters_.size(); }
  Pauli operator[](std::size_t qubit) const { return letters_[qubit]; }
  const std::vector<Pauli>& letters() const noexcept { return letters_; }

  bool is_identity() const noexcept;
  std::string str() const;

  // Bit masks over computational-basis indices. P|x> = i^{y_count} *
  // (-1)^{popcount(x & phase_mask)} |x ^ flip_mask>.
  std::uint64_t flip_mask() const noexcept { return flip_mask_; }
  std::uint64_t phase_mask() const noexcept { return phase_mask_; }
  unsigned y_count() const noexcept { return y_count_; }

  friend bool operator==(const PauliString& a, const PauliString& b) {
    return a.letters_ == b.letters_;
  }

 private:
  std::vector<Pauli> letters_;
  std::uint64_t flip_mask_ = 0;
  std::uint64_t phase_mask_ = 0;
  unsigned y_count_ = 0;
};

struct PauliTerm {
  double coefficient = 0.0;
  PauliString pauli;
};

/// Observable sum_j a_j P_j. Terms are kept exactly as declared: duplicates
/// are not merged, because the term count drives circuit counts.
class Hamiltonian {
 public:
  Hamiltonian(std::size_t qubit_count, std::vector<PauliTerm> terms);

  std::size_t qubit_count() const noexcept { return qubit_count_; }
  const std::vector<PauliTerm>& terms() const noexcept { return terms_; }

  // Number of terms that require a measured circuit (non-identity strings).
  std::size_t measured_term_count() const noexcept;

  // C = 2 * sum_j |a_j|, a deterministic bound on any single-shot error.
  double error_bound() const noexcept;

  // sum_j a_j^2 over measured terms; bounds the single-shot variance.
  double single_shot_variance_bound() const noexcept;

  // sum_j |a_j| over measured terms; bounds |d^2 f / d theta_i^2|.
  double abs_coefficient_sum() const noexcept;

  // Sum of coefficients on identity strings.
  double constant_offset() const noexcept;

 private:
  std::size_t qubit_count_;
  std::vector<PauliTerm> terms_;
};

// Text format: `qubits: <n>` header, then `<coefficient> <letters>` per line.
// `#` starts a comment. Throws ParseError.
Hamiltonian parse_hamiltonian(std::string_view source);
Hamiltonian load_hamiltonian(const std::string& path);
std::string serialize_hamiltonian(const Hamiltonian& h);

Eigen::MatrixXcd dense_matrix(const PauliString& p);
Eigen::MatrixXcd dense_matrix(const Hamiltonian& h);

// Minimum eigenvalue of dense_matrix(h). Throws DimensionError above the cap.
double exact_ground_energy(const Hamiltonian& h);

}  // namespace shoals
