// Microbenchmarks for EC densities and threshold solving.

#include <benchmark/benchmark.h>

#include "conerf/ec_density.hpp"
#include "conerf/inference.hpp"

namespace {

using namespace conerf;

void bm_tin_density(benchmark::State& state) {
  const ConeSpec cone = arc_cone(1.06);
  double t = 4.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tin_ec_density(3, t, cone, 110));
    t = t < 6.0 ? t + 1e-4 : 4.0;
  }
}

void bm_tlr_density(benchmark::State& state) {
  const ConeSpec cone = arc_cone(1.06);
  double t = 4.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tlr_ec_density(3, t, cone, 112));
    t = t < 6.0 ? t + 1e-4 : 4.0;
  }
}

void bm_threshold_solve(benchmark::State& state) {
  SearchRegion region;
  region.lkc = {1.0, 4.0 * M_PI * 12.5, 2.0 * M_PI * 12.5 * 12.5, 8086.0};
  const StatisticSpec stat = StatisticSpec::tin(arc_cone(1.06), 110);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_threshold(region, stat, 0.05).threshold);
  }
}

}  // namespace

BENCHMARK(bm_tin_density);
BENCHMARK(bm_tlr_density);
BENCHMARK(bm_threshold_solve);
BENCHMARK_MAIN();
