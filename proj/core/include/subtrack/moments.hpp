#pragma once

#include "subtrack/linalg.hpp"
#include "subtrack/subspace.hpp"

#include <cstddef>

namespace subtrack {

/// How the projection-aware second moment handles negative estimates.
/// `abs` folds them (the |·| of the update rule as usually written);
/// `clip` zeroes them (the conservative reading of the derivation).
enum class VarianceMode { abs, clip };

/// Adam moments in the r x n projected coordinates.
struct LowRankMoments {
  Matrix first;   // M
  Matrix second;  // V, element-wise >= 0
  std::size_t steps = 0;

  static LowRankMoments zeros(Index rank, Index cols) {
    return {Matrix::Zero(rank, cols), Matrix::Zero(rank, cols), 0};
  }
};

namespace moments {

/// M ← β₁M + (1−β₁)G̃,  V ← β₂V + (1−β₂)G̃².
LowRankMoments plain_update(const LowRankMoments& state, const Matrix& grad,
                            double beta1, double beta2);

/// Moment update across a change of basis, with Q = S_newᵀ S_old:
///
///   M ← β₁ (Q M) + (1−β₁) G̃
///   V ← β₂ (1−β₂^{t−1}) h(Q∘Q · (V − M∘M) + (Q M)∘(Q M)) + (1−β₂) G̃∘G̃
///
/// where t = state.steps + 1 is the 1-based index of this update and h is
/// |·| or max(·, 0) according to `mode`. `grad` must be projected with the
/// new basis.
LowRankMoments projection_aware_update(const LowRankMoments& state,
                                       const SubspaceBasis& new_basis,
                                       const SubspaceBasis& old_basis,
                                       const Matrix& grad, double beta1,
                                       double beta2, VarianceMode mode);

/// M ⊘ √(V + ε).
Matrix regularized_direction(const LowRankMoments& state, double eps);

}  // namespace moments
}  // namespace subtrack
