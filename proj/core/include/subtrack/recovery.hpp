#pragma once

#include "subtrack/linalg.hpp"
#include "subtrack/subspace.hpp"

#include <optional>

namespace subtrack {

struct RecoveryState {
  /// Frobenius norm of the correction applied on the previous step.
  std::optional<double> prev_lambda_norm;
};

namespace recovery {

inline constexpr double kDefaultEpsPhi = 1e-12;

/// Column-wise ratio ‖opt[:, i]‖ / ‖low[:, i]‖; columns with
/// ‖low[:, i]‖ < eps_phi get 0.
Vector scaling_factors(const Matrix& low, const Matrix& opt,
                       double eps_phi = kDefaultEpsPhi);

/// Λ[:, i] = φ_i · (G − S·low)[:, i]. The residual is projected off span(S)
/// a second time so Λ stays orthogonal to the basis even when G is nearly
/// inside it.
Matrix correction_term(const Matrix& G, const SubspaceBasis& S,
                       const Matrix& low, const Vector& phi);

struct LimitedCorrection {
  Matrix lambda;
  RecoveryState state;
};

/// Caps the step-to-step growth of ‖Λ‖_F at `zeta`. The first call (no
/// history) passes Λ through. The stored norm is the post-limit one.
LimitedCorrection apply_limiter(const Matrix& lambda,
                                const RecoveryState& state, double zeta);

}  // namespace recovery
}  // namespace subtrack
