#include <benchmark/benchmark.h>

#include "gesq/noise.hpp"
#include "gesq/sdp.hpp"
#include "gesq/subspaces.hpp"

namespace {

using namespace gesq;

// PPT relaxation over all cuts for S(3, d); D = 2 d^2.
void BM_GmLowerBound(benchmark::State& state) {
  const Subspace s = ges_2xd_pow(GesParams{3, static_cast<int>(state.range(0))});
  for (auto _ : state) benchmark::DoNotOptimize(gm_lower_bound(s).value);
}
BENCHMARK(BM_GmLowerBound)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

void BM_PptMixture(benchmark::State& state) {
  const HermitianOp rho = make_noisy_state(ges_2xd_pow(GesParams{3, static_cast<int>(state.range(0))}), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(ppt_mixture_monotone(rho, false).value);
}
BENCHMARK(BM_PptMixture)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_Compile(benchmark::State& state) {
  const Subspace s = ges_2xd_pow(GesParams{3, static_cast<int>(state.range(0))});
  const ConicProgram p = ppt_relaxation_program(s, Bipartition::all(3));
  for (auto _ : state) benchmark::DoNotOptimize(compile(p).lmi.m);
}
BENCHMARK(BM_Compile)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

}  // namespace
