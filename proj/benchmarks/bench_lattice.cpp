// Microbenchmarks for simulation, Euler characteristics, and LKC estimation.

#include <benchmark/benchmark.h>

#include "conerf/lattice.hpp"

namespace {

using namespace conerf;

void bm_simulate(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_smooth_gaussian({side, side}, 4.0, seed++).values.data());
  }
}

void bm_excursion_ec(benchmark::State& state) {
  const LatticeField field = simulate_smooth_gaussian({128, 128}, 4.0, 7);
  double t = 2.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(excursion_ec(field, t));
    t = t < 3.0 ? t + 1e-3 : 2.0;
  }
}

void bm_lkc_estimate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Dataset stack;
  stack.shape = {64, 64};
  stack.n = n;
  const long voxels = lattice_size(stack.shape);
  stack.values.assign(static_cast<size_t>(voxels) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    const LatticeField f = simulate_smooth_gaussian(stack.shape, 4.0, 100 + i);
    for (long v = 0; v < voxels; ++v) stack.values[v * n + i] = f.values[v];
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(lkc_top_estimate(stack));
  }
}

}  // namespace

BENCHMARK(bm_simulate)->Arg(64)->Arg(128);
BENCHMARK(bm_excursion_ec);
BENCHMARK(bm_lkc_estimate)->Arg(10)->Arg(30);
BENCHMARK_MAIN();
