// Serial references against the OpenMP kernels, plus the event-driven
// simulator against the literal step loop.

#include <benchmark/benchmark.h>

#include "fxlab/dense_solver.hpp"
#include "fxlab/experiment.hpp"
#include "fxlab/generators.hpp"
#include "fxlab/moran.hpp"
#include "fxlab/rng.hpp"

namespace {

using namespace fxlab;

const Graph& cycle50() {
  static const Graph g = cycle_graph(50);
  return g;
}

void BM_EstimateSerial(benchmark::State& state) {
  ProcessParams params{spaced_layout(50, 18), 10.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_fp_serial(cycle50(), params, std::uint64_t(state.range(0)), 7));
  }
}
BENCHMARK(BM_EstimateSerial)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_EstimateParallel(benchmark::State& state) {
  ProcessParams params{spaced_layout(50, 18), 10.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_fp(cycle50(), params, std::uint64_t(state.range(0)), 7));
  }
}
BENCHMARK(BM_EstimateParallel)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_SimulateStepwise(benchmark::State& state) {
  const Graph g = complete_graph(std::size_t(state.range(0)));
  ProcessParams params{contiguous_layout(g.size(), g.size() / 2), 1.0};
  Rng rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_stepwise(g, params, Configuration::single(g.size(), 0), rng, ~0ULL));
  }
}
BENCHMARK(BM_SimulateStepwise)->Arg(16)->Arg(64);

void BM_SimulateEvents(benchmark::State& state) {
  const Graph g = complete_graph(std::size_t(state.range(0)));
  ProcessParams params{contiguous_layout(g.size(), g.size() / 2), 1.0};
  Rng rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(g, params, Configuration::single(g.size(), 0), rng, ~0ULL));
  }
}
BENCHMARK(BM_SimulateEvents)->Arg(16)->Arg(64);

DenseMatrix dominant_matrix(std::size_t n) {
  DenseMatrix a(n);
  Rng rng(3);
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      a(i, j) = -uniform01(rng);
      row -= a(i, j);
    }
    a(i, i) = row + 1.0;
  }
  return a;
}

void BM_SolveSerial(benchmark::State& state) {
  const auto n = std::size_t(state.range(0));
  const DenseMatrix a = dominant_matrix(n);
  for (auto _ : state) benchmark::DoNotOptimize(solve_dense_serial(a, std::vector<double>(n, 1.0)));
}
BENCHMARK(BM_SolveSerial)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_SolveParallel(benchmark::State& state) {
  const auto n = std::size_t(state.range(0));
  const DenseMatrix a = dominant_matrix(n);
  for (auto _ : state) benchmark::DoNotOptimize(solve_dense(a, std::vector<double>(n, 1.0)));
}
BENCHMARK(BM_SolveParallel)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
