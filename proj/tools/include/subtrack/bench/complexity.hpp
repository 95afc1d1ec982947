#pragma once

#include "subtrack/linalg.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace subtrack::bench {

/// Median wall time of one subspace update, either the rank-1 geodesic
/// tracking step (fit, tangent, rotation) or a fresh truncated SVD of the
/// gradient, swept over n at fixed m.
struct ComplexityOptions {
  Index m = 256;
  std::vector<Index> ranks{4, 8};
  std::vector<Index> widths{256, 512, 1024, 2048};
  std::size_t reps = 21;
  std::uint64_t seed = 0;
};

struct TimingRow {
  Index m = 0, n = 0, r = 0;
  std::string method;  // "tracking" or "svd"
  double median_seconds = 0.0;
  std::size_t reps = 0;
};

std::vector<TimingRow> run_complexity(const ComplexityOptions& opts);

/// Least-squares slope of log(median_seconds) against log(n) for one
/// (method, r) series.
double loglog_slope(const std::vector<TimingRow>& rows, const std::string& method, Index r);

/// Median time for one (method, r, n) cell; throws if absent.
double median_time(const std::vector<TimingRow>& rows, const std::string& method, Index r,
                   Index n);

/// m,n,r,method,median_seconds,reps
void write_complexity_csv(std::ostream& out, const std::vector<TimingRow>& rows);

}  // namespace subtrack::bench
