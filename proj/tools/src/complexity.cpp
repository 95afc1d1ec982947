#include "subtrack/bench/complexity.hpp"

#include "subtrack/bench/csv.hpp"
#include "subtrack/bench/random.hpp"
#include "subtrack/subspace.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <functional>
#include <stdexcept>

namespace subtrack::bench {

namespace {

using Clock = std::chrono::steady_clock;

// One (method, r, n) cell. Each sample times a batch of calls long enough
// (>= 5 ms) that timer resolution stays negligible.
struct Cell {
  TimingRow row;
  std::function<void()> body;
  std::size_t batch = 1;
  std::vector<double> samples;

  double time_batch() const {
    const auto start = Clock::now();
    for (std::size_t i = 0; i < batch; ++i) body();
    return std::chrono::duration<double>(Clock::now() - start).count();
  }
};

constexpr double kMinSample = 5e-3;

// Keeps the optimizer from discarding a result.
volatile double g_sink = 0.0;

}  // namespace

std::vector<TimingRow> run_complexity(const ComplexityOptions& opts) {
  if (opts.reps < 1) throw std::invalid_argument("complexity: reps must be >= 1");
  Rng rng(opts.seed);
  // Inputs are kept alive for the whole sweep; std::deque keeps their
  // addresses stable for the captured references.
  std::deque<Matrix> grads;
  std::deque<SubspaceBasis> bases;
  std::vector<Cell> cells;
  for (Index r : opts.ranks) {
    for (Index n : opts.widths) {
      if (r < 1 || r > std::min(opts.m, n)) {
        throw std::invalid_argument("complexity: rank out of range");
      }
      const Matrix& G = grads.emplace_back(gaussian_matrix(rng, opts.m, n));
      SubspaceBasis& S = bases.emplace_back();
      S.basis = random_orthonormal(rng, opts.m, r);

      cells.push_back({{opts.m, n, r, "tracking", 0.0, opts.reps}, [&G, &S] {
                         const TangentRank1 T = subspace::tangent_from_gradient(S, G);
                         const SubspaceBasis next = subspace::geodesic_step(S, T, 1e-3, 0);
                         g_sink = g_sink + next.basis(0, 0);
                       }});
      cells.push_back({{opts.m, n, r, "svd", 0.0, opts.reps}, [&G, r] {
                         const SubspaceBasis next = subspace::init_from_gradient(G, r);
                         g_sink = g_sink + next.basis(0, 0);
                       }});
    }
  }

  for (auto& c : cells) {
    while (c.time_batch() < kMinSample && c.batch < (std::size_t{1} << 20)) c.batch *= 2;
  }
  // Round-robin over cells so that slow stretches on a shared machine are
  // spread over every cell instead of landing on a few.
  for (std::size_t rep = 0; rep < opts.reps; ++rep) {
    for (auto& c : cells) c.samples.push_back(c.time_batch() / static_cast<double>(c.batch));
  }

  std::vector<TimingRow> rows;
  for (auto& c : cells) {
    auto& t = c.samples;
    std::nth_element(t.begin(), t.begin() + t.size() / 2, t.end());
    c.row.median_seconds = t[t.size() / 2];
    rows.push_back(c.row);
  }
  return rows;
}

double loglog_slope(const std::vector<TimingRow>& rows, const std::string& method, Index r) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0, k = 0;
  for (const auto& row : rows) {
    if (row.method != method || row.r != r || !(row.median_seconds > 0.0)) continue;
    const double x = std::log(static_cast<double>(row.n));
    const double y = std::log(row.median_seconds);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    k += 1;
  }
  if (k < 2) throw std::invalid_argument("loglog_slope: fewer than two points");
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

double median_time(const std::vector<TimingRow>& rows, const std::string& method, Index r,
                   Index n) {
  for (const auto& row : rows) {
    if (row.method == method && row.r == r && row.n == n) return row.median_seconds;
  }
  throw std::invalid_argument("median_time: no such cell");
}

void write_complexity_csv(std::ostream& out, const std::vector<TimingRow>& rows) {
  CsvWriter csv(out, {"m", "n", "r", "method", "median_seconds", "reps"});
  for (const auto& row : rows) {
    csv.row() << static_cast<long long>(row.m) << static_cast<long long>(row.n)
              << static_cast<long long>(row.r) << row.method << row.median_seconds << row.reps;
  }
}

}  // namespace subtrack::bench
