#include <benchmark/benchmark.h>

#include "qslab/dynamics.hpp"
#include "qslab/experiments.hpp"
#include "qslab/quantify.hpp"
#include "qslab/sampling.hpp"

using namespace qslab;

namespace {

void BM_HermEig(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  CounterRng rng(1);
  const ComplexMatrix a = random_hermitian(d, rng);
  for (auto _ : state) benchmark::DoNotOptimize(herm_eig(a));
}
BENCHMARK(BM_HermEig)->Arg(2)->Arg(3)->Arg(4)->Arg(8);

void BM_TraceNormAsymmetry(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  CounterRng rng(2);
  const DensityMatrix rho = random_density(d, rng);
  const Observable k(random_hermitian(d, rng));
  for (auto _ : state) benchmark::DoNotOptimize(trace_norm_asymmetry(rho, k));
}
BENCHMARK(BM_TraceNormAsymmetry)->Arg(2)->Arg(3)->Arg(4);

void BM_BoundReport(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  CounterRng rng(3);
  const DensityMatrix rho = random_density(d, rng);
  const Observable k(random_hermitian(d, rng));
  const Observable h(random_unit_hermitian(d, rng));
  const BasisOptimizerConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(bound_report(rho, k, h, cfg));
}
BENCHMARK(BM_BoundReport)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_QubitTrial(benchmark::State& state) {
  const bool optimal = state.range(0) != 0;
  for (auto _ : state) {
    CounterRng rng(4);
    benchmark::DoNotOptimize(simulate_qubit_trial({0.6, 0.0, 0.0}, {0, 0, 1}, optimal, 1.0, 1e-3, rng));
  }
}
BENCHMARK(BM_QubitTrial)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
