#pragma once

#include "subtrack/linalg.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace subtrack::bench {

/// Synthetic gradient model G(W) = A + B W C with symmetric positive definite
/// B (m x m) and C (n x n), trained by plain projected gradient descent
///
///   W ← W − μ Sˡ P Sʳᵀ,  P = Sˡᵀ G(W) Sʳ
///
/// with the bases Sˡ (m x r), Sʳ (n x r) held fixed. With A = 0 and W₀ inside
/// span(Sˡ)·span(Sʳ)ᵀ the projected gradient obeys P ← P − μ B̂ P Ĉ, where
/// B̂ = SˡᵀBSˡ and Ĉ = SʳᵀCSʳ, so ‖P‖ decays at rate 1 − μ λmin(B̂) λmin(Ĉ).
struct ContractionOptions {
  Index m = 8;
  Index n = 12;
  Index r = 3;
  std::size_t steps = 2000;
  std::uint64_t seed = 0;
  double spd_lo = 0.5;  // eigenvalue range of B and C
  double spd_hi = 4.0;
  /// μ as a fraction of 1 / (λmax(B̂) λmax(Ĉ)). Must be in [0, 1].
  double mu_fraction = 0.05;
  bool with_offset = false;  // A ≠ 0 (then P converges to a nonzero floor)
};

struct ContractionTrace {
  Matrix A, B, C, W0, left, right;
  double mu = 0.0;
  double kappa = 0.0;           // λmin(B̂) λmin(Ĉ)
  double predicted_rate = 0.0;  // 1 − μ κ
  std::vector<double> p_norm;   // ‖P_t‖_F for t = 0..steps
};

ContractionTrace run_contraction(const ContractionOptions& opts);

/// Geometric rate from a least-squares fit of log ‖P_t‖ against t over
/// t ∈ [first, last]. Entries that are zero or non-finite are skipped.
double fitted_rate(const std::vector<double>& p_norm, std::size_t first, std::size_t last);

/// step,p_norm
void write_contraction_csv(std::ostream& out, const ContractionTrace& trace);

}  // namespace subtrack::bench
