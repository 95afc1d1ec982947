#include "subtrack/subspace.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace subtrack;

namespace {

Matrix gaussian(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> dist;
  Matrix M(rows, cols);
  for (Index i = 0; i < M.size(); ++i) M.data()[i] = dist(rng);
  return M;
}

// Arguments: m, n, r.
void BM_TrackingStep(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const Index m = state.range(0), n = state.range(1), r = state.range(2);
  const Matrix G = gaussian(rng, m, n);
  const SubspaceBasis S = subspace::init_from_gradient(gaussian(rng, m, n), r);
  for (auto _ : state) {
    const TangentRank1 T = subspace::tangent_from_gradient(S, G);
    benchmark::DoNotOptimize(subspace::geodesic_step(S, T, 1e-3));
  }
  state.SetComplexityN(n);
}

void BM_SvdReinit(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const Index m = state.range(0), n = state.range(1), r = state.range(2);
  const Matrix G = gaussian(rng, m, n);
  for (auto _ : state) benchmark::DoNotOptimize(subspace::init_from_gradient(G, r));
  state.SetComplexityN(n);
}

void sweep(benchmark::internal::Benchmark* b) {
  for (long n : {256, 512, 1024, 2048}) b->Args({256, n, 4});
}

}  // namespace

BENCHMARK(BM_TrackingStep)->Apply(sweep)->Complexity(benchmark::oN)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SvdReinit)->Apply(sweep)->Complexity(benchmark::oN)->Unit(benchmark::kMillisecond);
