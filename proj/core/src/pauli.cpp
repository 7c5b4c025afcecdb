#include "shoals/pauli.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "text_util.hpp"

namespace shoals {

PauliString::PauliString(std::vector<Pauli> letters) : letters_(std::move(letters)) {
  if (letters_.size() > 63) {
    throw std::invalid_argument("Pauli strings are limited to 63 qubits");
  }
  const std::size_t n = letters_.size();
  for (std::size_t q = 0; q < n; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
    switch (letters_[q]) {
      case Pauli::I:
        break;
      case Pauli::X:
        flip_mask_ |= bit;
        break;
      case Pauli::Y:
        flip_mask_ |= bit;
        phase_mask_ |= bit;
        ++y_count_;
        break;
      case Pauli::Z:
        phase_mask_ |= bit;
        break;
    }
  }
}

PauliString PauliString::parse(std::string_view letters) {
  std::vector<Pauli> out;
  out.reserve(letters.size());
  for (char ch : letters) {
    switch (ch) {
      case 'I': out.push_back(Pauli::I); break;
      case 'X': out.push_back(Pauli::X); break;
      case 'Y': out.push_back(Pauli::Y); break;
      case 'Z': out.push_back(Pauli::Z); break;
      default:
        throw std::invalid_argument(std::string("invalid Pauli letter '") + ch + "'");
    }
  }
  if (out.empty()) throw std::invalid_argument("empty Pauli string");
  return PauliString(std::move(out));
}

bool PauliString::is_identity() const noexcept {
  return flip_mask_ == 0 && phase_mask_ == 0;
}

std::string PauliString::str() const {
  static constexpr char kNames[] = {'I', 'X', 'Y', 'Z'};
  std::string s;
  s.reserve(letters_.size());
  for (Pauli p : letters_) s.push_back(kNames[static_cast<int>(p)]);
  return s;
}

Hamiltonian::Hamiltonian(std::size_t qubit_count, std::vector<PauliTerm> terms)
    : qubit_count_(qubit_count), terms_(std::move(terms)) {
  if (qubit_count_ == 0) throw std::invalid_argument("Hamiltonian needs at least one qubit");
  for (const auto& t : terms_) {
    if (!std::isfinite(t.coefficient)) {
      throw std::invalid_argument("non-finite Hamiltonian coefficient");
    }
    if (t.pauli.qubit_count() != qubit_count_) {
      throw std::invalid_argument("Pauli string " + t.pauli.str() + " does not act on " +
                                  std::to_string(qubit_count_) + " qubits");
    }
  }
}

std::size_t Hamiltonian::measured_term_count() const noexcept {
  std::size_t count = 0;
  for (const auto& t : terms_) count += t.pauli.is_identity() ? 0 : 1;
  return count;
}

double Hamiltonian::error_bound() const noexcept {
  double sum = 0.0;
  for (const auto& t : terms_) sum += std::abs(t.coefficient);
  return 2.0 * sum;
}

double Hamiltonian::single_shot_variance_bound() const noexcept {
  double sum = 0.0;
  for (const auto& t : terms_) {
    if (!t.pauli.is_identity()) sum += t.coefficient * t.coefficient;
  }
  return sum;
}

double Hamiltonian::abs_coefficient_sum() const noexcept {
  double sum = 0.0;
  for (const auto& t : terms_) {
    if (!t.pauli.is_identity()) sum += std::abs(t.coefficient);
  }
  return sum;
}

double Hamiltonian::constant_offset() const noexcept {
  double sum = 0.0;
  for (const auto& t : terms_) {
    if (t.pauli.is_identity()) sum += t.coefficient;
  }
  return sum;
}

Hamiltonian parse_hamiltonian(std::string_view source) {
  std::optional<std::size_t> qubits;
  std::vector<PauliTerm> terms;
  detail::for_each_line(source, [&](std::size_t line_no, std::string_view line) {
    auto fields = detail::split_ws(line);
    if (fields.empty()) return;
    if (!qubits) {
      qubits = detail::parse_header_count(line_no, line, "qubits");
      return;
    }
    if (fields.size() != 2) {
      throw ParseError(line_no, "expected '<coefficient> <letters>'");
    }
    double coeff = 0.0;
    if (!detail::parse_double(fields[0], coeff) || !std::isfinite(coeff)) {
      throw ParseError(line_no, "invalid or non-finite coefficient '" + std::string(fields[0]) + "'");
    }
    PauliString p;
    try {
      p = PauliString::parse(fields[1]);
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
    if (p.qubit_count() != *qubits) {
      throw ParseError(line_no, "Pauli string '" + std::string(fields[1]) + "' has length " +
                                    std::to_string(p.qubit_count()) + ", expected " +
                                    std::to_string(*qubits));
    }
    terms.push_back({coeff, std::move(p)});
  });
  if (!qubits) throw ParseError(1, "missing 'qubits:' header");
  return Hamiltonian(*qubits, std::move(terms));
}

Hamiltonian load_hamiltonian(const std::string& path) {
  return parse_hamiltonian(detail::read_file(path));
}

std::string serialize_hamiltonian(const Hamiltonian& h) {
  std::ostringstream out;
  out << "qubits: " << h.qubit_count() << '\n';
  char buf[64];
  for (const auto& t : h.terms()) {
    std::snprintf(buf, sizeof buf, "%.17g", t.coefficient);
    out << buf << ' ' << t.pauli.str() << '\n';
  }
  return out.str();
}

namespace {

void check_dense_cap(std::size_t qubits) {
  if (qubits > kMaxDenseQubits) {
    throw DimensionError("dense representation limited to " + std::to_string(kMaxDenseQubits) +
                         " qubits, got " + std::to_string(qubits));
  }
}

std::complex<double> i_power(unsigned k) {
  switch (k % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

void accumulate(Eigen::MatrixXcd& m, const PauliString& p, double scale) {
  const std::uint64_t dim = std::uint64_t{1} << p.qubit_count();
  const std::complex<double> base = scale * i_power(p.y_count());
  for (std::uint64_t col = 0; col < dim; ++col) {
    const bool odd = std::popcount(col & p.phase_mask()) & 1;
    m(static_cast<Eigen::Index>(col ^ p.flip_mask()), static_cast<Eigen::Index>(col)) +=
        odd ? -base : base;
  }
}

}  // namespace

Eigen::MatrixXcd dense_matrix(const PauliString& p) {
  check_dense_cap(p.qubit_count());
  const auto dim = static_cast<Eigen::Index>(1) << p.qubit_count();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  accumulate(m, p, 1.0);
  return m;
}

Eigen::MatrixXcd dense_matrix(const Hamiltonian& h) {
  check_dense_cap(h.qubit_count());
  const auto dim = static_cast<Eigen::Index>(1) << h.qubit_count();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : h.terms()) accumulate(m, t.pauli, t.coefficient);
  return m;
}

double exact_ground_energy(const Hamiltonian& h) {
  const Eigen::MatrixXcd m = dense_matrix(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigen-decomposition failed");
  }
  return solver.eigenvalues().minCoeff();
}

}  // namespace shoals
