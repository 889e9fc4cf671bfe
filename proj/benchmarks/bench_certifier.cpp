#include <benchmark/benchmark.h>

#include <numbers>

#include "lgcert/certifier.hpp"
#include "lgcert/ontology.hpp"
#include "lgcert/quantum.hpp"

namespace {

using namespace lgcert;

Delta delta_arg(const benchmark::State& state) { return state.range(0) == 3 ? Delta::Three : Delta::Four; }

void BM_SolveGuessingLp(benchmark::State& state) {
  const CertificationQuery q{delta_arg(state), 0.5, Context(1, 2), {}};
  const auto problem = build_lp(q, Outcome::Plus, Outcome::Plus);
  for (auto _ : state) benchmark::DoNotOptimize(lp::solve(problem));
}
BENCHMARK(BM_SolveGuessingLp)->Arg(3)->Arg(4);

void BM_GuessingProbability(benchmark::State& state) {
  const CertificationQuery q{delta_arg(state), 2 * std::numbers::sqrt2 - 2, Context(1, 2), {}};
  for (auto _ : state) benchmark::DoNotOptimize(guessing_probability(q));
}
BENCHMARK(BM_GuessingProbability)->Arg(3)->Arg(4);

void BM_Sweep(benchmark::State& state) {
  const Delta d = delta_arg(state);
  const auto grid = default_epsilon_grid(d, true);
  const auto& contexts = LgiFunctional::for_delta(d).contexts();
  for (auto _ : state) benchmark::DoNotOptimize(sweep(d, grid, contexts));
}
BENCHMARK(BM_Sweep)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_QuantumBehavior(benchmark::State& state) {
  const auto grid = quantum::TimeGrid::equally_spaced(Delta::Four, std::numbers::pi / 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        quantum::behavior_from_quantum(quantum::QubitState::maximally_mixed(), quantum::Dynamics(1.0), grid));
  }
}
BENCHMARK(BM_QuantumBehavior);

void BM_TheoremSuite(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(ontology::run_theorem_suite(42, 1000, static_cast<std::size_t>(state.range(0)), Delta::Four));
  }
}
BENCHMARK(BM_TheoremSuite)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
