#include <benchmark/benchmark.h>

#include <vector>

#include "shoals/shoals.hpp"

namespace {

shoals::Problem layered_problem(std::size_t qubits) {
  // Alternating-field Ising chain with one Y and one ZY rotation per qubit.
  std::string ham = "qubits: " + std::to_string(qubits) + "\n";
  std::string ansatz = "qubits: " + std::to_string(qubits) + "\nparams: " +
                       std::to_string(2 * qubits) + "\n";
  for (std::size_t q = 0; q < qubits; ++q) {
    std::string x(qubits, 'I');
    x[q] = 'X';
    ham += "0.5 " + x + "\n";
    std::string y(qubits, 'I');
    y[q] = 'Y';
    ansatz += "gate " + std::to_string(q) + " " + y + "\n";
    if (q + 1 < qubits) {
      std::string zz(qubits, 'I');
      zz[q] = 'Z';
      zz[q + 1] = 'Z';
      ham += "-1.0 " + zz + "\n";
    }
  }
  for (std::size_t q = 0; q < qubits; ++q) {
    std::string zy(qubits, 'I');
    zy[q] = 'Z';
    zy[(q + 1) % qubits] = 'Y';
    if (qubits == 1) zy[0] = 'Y';
    ansatz += "gate " + std::to_string(qubits + q) + " " + zy + "\n";
  }
  return shoals::Problem("bench", shoals::parse_hamiltonian(ham), shoals::parse_ansatz(ansatz));
}

void BM_PrepareState(benchmark::State& state) {
  const auto problem = layered_problem(static_cast<std::size_t>(state.range(0)));
  std::vector<double> theta(problem.parameter_count(), 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(shoals::prepare_state(problem.ansatz(), theta));
  }
}
BENCHMARK(BM_PrepareState)->Arg(2)->Arg(6)->Arg(10)->Arg(14);

void BM_ExactGradient(benchmark::State& state) {
  const auto problem = layered_problem(static_cast<std::size_t>(state.range(0)));
  std::vector<double> theta(problem.parameter_count(), 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(shoals::exact_gradient(problem, theta));
  }
}
BENCHMARK(BM_ExactGradient)->Arg(4)->Arg(8);

void BM_SampleF(benchmark::State& state) {
  const auto problem = shoals::load_bundled_problem("h2");
  const std::vector<double> theta{0.1, -0.2, 0.3};
  shoals::Rng rng(7);
  const auto draws = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(shoals::sample_f(problem, theta, draws, rng));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleF)->Arg(1000)->Arg(100000);

void BM_ShoalsToy2q(benchmark::State& state) {
  const auto problem = shoals::load_bundled_problem("toy-2q");
  const shoals::SolverSpec solver{"shoals", shoals::ShoalsConfig{}};
  shoals::RunOptions options;
  options.budget.max_seconds = 1.0e4;
  std::uint32_t seed = 0;
  for (auto _ : state) {
    shoals::Rng init{1u, seed, 0u};
    shoals::Rng rng{1u, seed++, 1u};
    const auto theta0 = shoals::random_initial_point(problem.parameter_count(), init);
    benchmark::DoNotOptimize(shoals::run_solver(problem, solver, rng, theta0, options));
  }
}
BENCHMARK(BM_ShoalsToy2q)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
