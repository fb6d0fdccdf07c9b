#include <benchmark/benchmark.h>

#include <random>

#include "gesq/tensor_core.hpp"

namespace {

using namespace gesq;

CMatrix random_matrix(Index n) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  CMatrix m(n, n);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = {g(rng), g(rng)};
  return m;
}

// Partial transpose on the first party of a uniform three-party space.
void BM_PartialTranspose(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const HilbertSpace space = HilbertSpace::uniform(3, d);
  const CMatrix m = random_matrix(space.total_dim());
  const std::vector<bool> mask = {true, false, false};
  for (auto _ : state) benchmark::DoNotOptimize(partial_transpose(m, space, mask));
  state.SetComplexityN(space.total_dim());
}
BENCHMARK(BM_PartialTranspose)->DenseRange(2, 6)->Complexity();

void BM_TopEigenpair(benchmark::State& state) {
  const CMatrix a = random_matrix(state.range(0));
  const CMatrix h = a + a.adjoint();
  for (auto _ : state) benchmark::DoNotOptimize(top_eigenpair(h));
}
BENCHMARK(BM_TopEigenpair)->RangeMultiplier(2)->Range(8, 128);

}  // namespace
