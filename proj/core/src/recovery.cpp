#include "subtrack/recovery.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace subtrack::recovery {

Vector scaling_factors(const Matrix& low, const Matrix& opt, double eps_phi) {
  if (low.rows() != opt.rows() || low.cols() != opt.cols()) {
    throw std::invalid_argument("scaling_factors: shape mismatch");
  }
  const Vector low_norms = low.colwise().norm().transpose();
  const Vector opt_norms = opt.colwise().norm().transpose();
  Vector phi = Vector::Zero(low.cols());
  for (Index i = 0; i < phi.size(); ++i) {
    if (low_norms(i) >= eps_phi) phi(i) = opt_norms(i) / low_norms(i);
  }
  return phi;
}

Matrix correction_term(const Matrix& G, const SubspaceBasis& S,
                       const Matrix& low, const Vector& phi) {
  if (G.rows() != S.dim() || low.rows() != S.rank() ||
      low.cols() != G.cols() || phi.size() != G.cols()) {
    throw std::invalid_argument(
        "correction_term: gradient " + std::to_string(G.rows()) + "x" +
        std::to_string(G.cols()) + ", basis rank " + std::to_string(S.rank()) +
        ", low-rank " + std::to_string(low.rows()) + "x" +
        std::to_string(low.cols()) + ", phi " + std::to_string(phi.size()));
  }
  Matrix residual = G - S.basis * low;
  residual -= S.basis * (S.basis.transpose() * residual);
  return residual * phi.asDiagonal();
}

LimitedCorrection apply_limiter(const Matrix& lambda,
                                const RecoveryState& state, double zeta) {
  if (!(zeta > 0.0)) {
    throw std::invalid_argument("apply_limiter: zeta must be > 0");
  }
  LimitedCorrection out{lambda, state};
  const double norm = lambda.norm();
  if (state.prev_lambda_norm) {
    const double cap = zeta * *state.prev_lambda_norm;
    if (norm > cap) {
      // Covers prev = 0 as well: the ratio is +inf and the cap is 0.
      if (cap > 0.0) {
        out.lambda = lambda * (cap / norm);
        // Rounding can leave the rescaled norm an ulp above the cap.
        for (int i = 0; i < 4; ++i) {
          const double scaled = out.lambda.norm();
          if (scaled <= cap) break;
          out.lambda *= std::nextafter(cap / scaled, 0.0);
        }
      } else {
        out.lambda.setZero();
      }
    }
  }
  out.state.prev_lambda_norm = out.lambda.norm();
  return out;
}

}  // namespace subtrack::recovery
