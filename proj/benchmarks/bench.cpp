// Microbenchmarks for the hot paths: the quadrature oracle, the multiplier
// solvers, the allocation rules, and the Pareto-improvement search.
// Run: ./build/benchmarks/fairdiv_bench [--benchmark_filter=...]
#include <benchmark/benchmark.h>

#include <cmath>

#include "fairdiv/allocate.hpp"
#include "fairdiv/experiment.hpp"
#include "fairdiv/fairness.hpp"
#include "fairdiv/probability.hpp"
#include "fairdiv/solver.hpp"

using namespace fairdiv;

namespace {

AgentProfile profile_of_size(int n) {
  // Slices of the ten-peak profile give matched-size agent sets.
  AgentProfile full = builtin_profile("peak10");
  AgentProfile prof;
  prof.name = "peak-slice";
  for (int i = 0; i < n; ++i) prof.agents.push_back(full.agents[i]);
  return prof;
}

MultiplierVector spread_multipliers(int n) {
  MultiplierVector beta(n);
  for (int i = 0; i < n; ++i) beta[i] = 1.0 + 0.07 * i;
  return beta;
}

void BM_OracleQuadrature(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto prof = profile_of_size(n);
  const auto beta = spread_multipliers(n);
  for (auto _ : state)
    benchmark::DoNotOptimize(resulting_probabilities(prof, beta));
}

void BM_OracleMonteCarlo(benchmark::State& state) {
  const auto prof = profile_of_size(4);
  const auto beta = spread_multipliers(4);
  const auto samples = static_cast<std::uint64_t>(state.range(0));
  RandomSource rng(99);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        resulting_probabilities_mc(prof, beta, samples, rng));
}

void BM_SolverFixedEps(benchmark::State& state) {
  const auto prof = profile_of_size(static_cast<int>(state.range(0)));
  SolverConfig cfg;
  cfg.delta = 1e-2;
  cfg.q_bound = 1.9;
  for (auto _ : state) {
    ProbabilityOracle oracle(prof);
    benchmark::DoNotOptimize(equalize_fixed_eps(oracle, cfg));
  }
}

void BM_SolverAnnealed(benchmark::State& state) {
  const auto prof = profile_of_size(static_cast<int>(state.range(0)));
  SolverConfig cfg;
  cfg.delta = 1e-3;
  cfg.q_bound = 1.9;
  for (auto _ : state) {
    ProbabilityOracle oracle(prof);
    benchmark::DoNotOptimize(equalize_annealed(oracle, cfg));
  }
}

void BM_MultiplierAllocate(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto inst = sample_instance(builtin_profile("peak10"), m, 7);
  const auto beta = spread_multipliers(inst.n);
  for (auto _ : state)
    benchmark::DoNotOptimize(multiplier_allocation(inst, beta));
}

void BM_RoundRobin(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto inst = sample_instance(builtin_profile("peak10"), m, 7);
  for (auto _ : state) benchmark::DoNotOptimize(round_robin(inst));
}

void BM_MaxPercentile(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto prof = builtin_profile("percentile-counterexample");
  const auto inst = sample_instance(prof, m, 7);
  for (auto _ : state)
    benchmark::DoNotOptimize(max_percentile_allocation(inst, prof));
}

void BM_FractionalMnw(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto inst = sample_instance(builtin_profile("peak10"), m, 7);
  for (auto _ : state) benchmark::DoNotOptimize(fractional_mnw(inst, 1e-5));
}

void BM_EnvyCheck(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto inst = sample_instance(builtin_profile("peak10"), m, 7);
  const auto alloc = round_robin(inst);
  for (auto _ : state) benchmark::DoNotOptimize(is_envy_free(inst, alloc));
}

void BM_ImprovementSearch(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto prof = builtin_profile("percentile-counterexample");
  const auto inst = sample_instance(prof, m, 7);
  const auto alloc = max_percentile_allocation(inst, prof);
  for (auto _ : state)
    benchmark::DoNotOptimize(find_pareto_improvement(inst, alloc, 2));
}

BENCHMARK(BM_OracleQuadrature)->Arg(2)->Arg(4)->Arg(10);
BENCHMARK(BM_OracleMonteCarlo)->Arg(10000)->Arg(100000);
BENCHMARK(BM_SolverFixedEps)->Arg(2)->Arg(4);
BENCHMARK(BM_SolverAnnealed)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MultiplierAllocate)->Arg(500)->Arg(5000);
BENCHMARK(BM_RoundRobin)->Arg(500)->Arg(5000);
BENCHMARK(BM_MaxPercentile)->Arg(500)->Arg(5000);
BENCHMARK(BM_FractionalMnw)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnvyCheck)->Arg(500)->Arg(5000);
BENCHMARK(BM_ImprovementSearch)
    ->Arg(500)
    ->Arg(5000)
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
