#include <benchmark/benchmark.h>

#include "gesq/subspaces.hpp"
#include "gesq/variational.hpp"

namespace {

using namespace gesq;

// Ten restarts of the product-vector seesaw on S(N, d).
void BM_SeesawGm(benchmark::State& state) {
  const Subspace s = ges_2xd_pow(GesParams{static_cast<int>(state.range(0)), static_cast<int>(state.range(1))});
  SeesawConfig cfg;
  cfg.restarts = 10;
  for (auto _ : state) benchmark::DoNotOptimize(seesaw_gm(s, cfg).entanglement);
}
BENCHMARK(BM_SeesawGm)->Args({3, 3})->Args({3, 5})->Args({4, 4})->Args({5, 3})->Unit(benchmark::kMillisecond);

void BM_SeesawGgmCuts(benchmark::State& state) {
  const Subspace s = q1_subspace(3, static_cast<int>(state.range(0)));
  SeesawConfig cfg;
  cfg.restarts = 10;
  for (auto _ : state) benchmark::DoNotOptimize(ggm_via_cuts(s, cfg).value);
}
BENCHMARK(BM_SeesawGgmCuts)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

}  // namespace
