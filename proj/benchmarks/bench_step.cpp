#include "subtrack/engine.hpp"

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

// Arguments: m, n, update interval. Cycles through a small pool of
// gradients so the tracker sees changing input.
void BM_SubtrackStep(benchmark::State& state) {
  std::mt19937_64 rng(11);
  const Index m = state.range(0), n = state.range(1);
  SubTrackConfig cfg;
  cfg.rank = 8;
  cfg.update_interval = static_cast<std::size_t>(state.range(2));
  cfg.eta = 1.0;
  std::vector<Matrix> grads;
  for (int i = 0; i < 8; ++i) grads.push_back(gaussian(rng, m, n));
  Matrix W = gaussian(rng, m, n);
  ParamState st;
  subtrack_step(W, grads[0], st, cfg);  // basis initialisation is not timed
  std::size_t i = 1;
  for (auto _ : state) {
    subtrack_step(W, grads[i++ % grads.size()], st, cfg);
    benchmark::ClobberMemory();
  }
}

void BM_FullAdamStep(benchmark::State& state) {
  std::mt19937_64 rng(11);
  const Index m = state.range(0), n = state.range(1);
  SubTrackConfig cfg;
  const Matrix G = gaussian(rng, m, n);
  Matrix W = gaussian(rng, m, n);
  AdamState st;
  for (auto _ : state) {
    full_adam_step(W, G, st, cfg);
    benchmark::ClobberMemory();
  }
}

}  // namespace

BENCHMARK(BM_SubtrackStep)->Args({256, 1024, 1})->Args({256, 1024, 200})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FullAdamStep)->Args({256, 1024})->Unit(benchmark::kMicrosecond);
