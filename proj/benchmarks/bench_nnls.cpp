// Microbenchmarks for the cone projection solvers.

#include <random>

#include <benchmark/benchmark.h>

#include "conerf/nnls.hpp"

namespace {

struct Instance {
  Eigen::MatrixXd X;
  std::vector<Eigen::VectorXd> zs;
};

Instance make_instance(int n, int m, int draws) {
  std::mt19937_64 gen(n * 1000 + m);
  std::normal_distribution<double> normal(0.0, 1.0);
  Instance inst;
  inst.X.resize(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) inst.X(i, j) = normal(gen);
  for (int d = 0; d < draws; ++d) {
    Eigen::VectorXd z(n);
    for (int i = 0; i < n; ++i) z[i] = normal(gen);
    inst.zs.push_back(z);
  }
  return inst;
}

void bm_nnls(benchmark::State& state) {
  const Instance inst = make_instance(static_cast<int>(state.range(0)),
                                      static_cast<int>(state.range(1)), 64);
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(conerf::nnls(inst.X, inst.zs[i % inst.zs.size()]).chibar);
    ++i;
  }
}

void bm_all_subsets(benchmark::State& state) {
  const Instance inst = make_instance(static_cast<int>(state.range(0)),
                                      static_cast<int>(state.range(1)), 64);
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        conerf::all_subsets_project(inst.X, inst.zs[i % inst.zs.size()]).chibar);
    ++i;
  }
}

void bm_nnls_warm(benchmark::State& state) {
  const Instance inst = make_instance(static_cast<int>(state.range(0)),
                                      static_cast<int>(state.range(1)), 64);
  std::vector<int> warm;
  size_t i = 0;
  for (auto _ : state) {
    const conerf::FitResult fit = conerf::nnls(inst.X, inst.zs[i % inst.zs.size()], &warm);
    benchmark::DoNotOptimize(fit.chibar);
    warm = fit.active_set;
    ++i;
  }
}

}  // namespace

BENCHMARK(bm_nnls)->Args({3, 2})->Args({10, 6})->Args({112, 2});
BENCHMARK(bm_nnls_warm)->Args({10, 6})->Args({112, 2});
BENCHMARK(bm_all_subsets)->Args({10, 6});
BENCHMARK_MAIN();
