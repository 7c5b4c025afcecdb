#include "shoals/problem.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

namespace shoals {

Problem::Problem(std::string name, Hamiltonian hamiltonian, AnsatzCircuit ansatz,
                 std::optional<std::size_t> circuits_per_f,
                 std::optional<std::size_t> circuits_per_g)
    : name_(std::move(name)),
      hamiltonian_(std::move(hamiltonian)),
      ansatz_(std::move(ansatz)) {
  if (hamiltonian_.qubit_count() != ansatz_.qubit_count()) {
    throw std::invalid_argument("Hamiltonian and ansatz act on different qubit counts");
  }
  if (hamiltonian_.measured_term_count() == 0) {
    throw std::invalid_argument("Hamiltonian has no measurable (non-identity) terms");
  }
  circuits_per_f_ = circuits_per_f.value_or(hamiltonian_.measured_term_count());
  circuits_per_g_ = circuits_per_g.value_or(2 * ansatz_.parameter_count() * circuits_per_f_);
  if (circuits_per_f_ == 0 || circuits_per_g_ == 0) {
    throw std::invalid_argument("circuit counts must be positive");
  }
}

namespace {

double objective_of_state(const Hamiltonian& h, const StateVector& state) {
  double sum = 0.0;
  for (const auto& t : h.terms()) {
    sum += t.pauli.is_identity() ? t.coefficient : t.coefficient * state.expectation(t.pauli);
  }
  return sum;
}

std::vector<double> shifted(std::span<const double> theta, std::size_t i, double delta) {
  std::vector<double> out(theta.begin(), theta.end());
  out[i] += delta;
  return out;
}

constexpr double kShift = std::numbers::pi / 2.0;

}  // namespace

double exact_objective(const Problem& problem, std::span<const double> theta) {
  return objective_of_state(problem.hamiltonian(), prepare_state(problem.ansatz(), theta));
}

std::vector<double> exact_gradient(const Problem& problem, std::span<const double> theta) {
  if (theta.size() != problem.parameter_count()) {
    throw std::invalid_argument("theta length mismatch");
  }
  std::vector<double> grad(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    grad[i] = 0.5 * (exact_objective(problem, shifted(theta, i, kShift)) -
                     exact_objective(problem, shifted(theta, i, -kShift)));
  }
  return grad;
}

SingleShotSampler::SingleShotSampler(const Hamiltonian& h, const StateVector& state) {
  for (const auto& t : h.terms()) {
    if (t.pauli.is_identity()) {
      offset_ += t.coefficient;
      continue;
    }
    const double e = state.expectation(t.pauli);
    coefficients_.push_back(t.coefficient);
    expectations_.push_back(e);
    plus_probability_.push_back(std::clamp(0.5 * (1.0 + e), 0.0, 1.0));
  }
}

double SingleShotSampler::draw(Rng& rng) const {
  double sum = offset_;
  for (std::size_t j = 0; j < coefficients_.size(); ++j) {
    sum += rng.uniform() < plus_probability_[j] ? coefficients_[j] : -coefficients_[j];
  }
  return sum;
}

double SingleShotSampler::combine(std::span<const int> outcomes) const {
  if (outcomes.size() != coefficients_.size()) {
    throw std::invalid_argument("one outcome per measured term required");
  }
  double sum = offset_;
  for (std::size_t j = 0; j < coefficients_.size(); ++j) sum += coefficients_[j] * outcomes[j];
  return sum;
}

double SingleShotSampler::exact_mean() const noexcept {
  double sum = offset_;
  for (std::size_t j = 0; j < coefficients_.size(); ++j) sum += coefficients_[j] * expectations_[j];
  return sum;
}

double SingleShotSampler::exact_variance() const noexcept {
  double sum = 0.0;
  for (std::size_t j = 0; j < coefficients_.size(); ++j) {
    sum += coefficients_[j] * coefficients_[j] * (1.0 - expectations_[j] * expectations_[j]);
  }
  return std::max(sum, 0.0);
}

double single_shot_f(const Problem& problem, std::span<const double> theta, Rng& rng,
                     CostLedger& ledger) {
  const SingleShotSampler sampler(problem.hamiltonian(), prepare_state(problem.ansatz(), theta));
  ledger.batch_request(problem.circuits_per_f(), problem.circuits_per_f());
  return sampler.draw(rng);
}

double single_shot_partial(const Problem& problem, std::span<const double> theta,
                           std::size_t i, Rng& rng, CostLedger& ledger) {
  if (i >= problem.parameter_count()) throw std::out_of_range("coordinate index out of range");
  const auto& h = problem.hamiltonian();
  const SingleShotSampler plus(h, prepare_state(problem.ansatz(), shifted(theta, i, kShift)));
  const SingleShotSampler minus(h, prepare_state(problem.ansatz(), shifted(theta, i, -kShift)));
  ledger.batch_request(2 * problem.circuits_per_f(), 2 * problem.circuits_per_f());
  const double f_plus = plus.draw(rng);
  const double f_minus = minus.draw(rng);
  return 0.5 * (f_plus - f_minus);
}

double single_shot_partial_variance(const Problem& problem, std::span<const double> theta,
                                    std::size_t i) {
  const auto& h = problem.hamiltonian();
  const SingleShotSampler plus(h, prepare_state(problem.ansatz(), shifted(theta, i, kShift)));
  const SingleShotSampler minus(h, prepare_state(problem.ansatz(), shifted(theta, i, -kShift)));
  return 0.25 * (plus.exact_variance() + minus.exact_variance());
}

}  // namespace shoals
