#include "subtrack/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace subtrack::subspace {

namespace {

std::string dims(Index r, Index c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

void require_rows(const SubspaceBasis& S, const Matrix& G, const char* what) {
  if (G.rows() != S.dim()) {
    throw std::invalid_argument(std::string(what) + ": basis is " +
                                dims(S.dim(), S.rank()) + " but operand is " +
                                dims(G.rows(), G.cols()));
  }
}

// A left tangent vector that keeps less than this fraction of its length
// after removing the in-span part was never horizontal: it is rounding noise
// from a (numerically) zero ∇F.
constexpr double kMinHorizontalNorm = 0.5;

}  // namespace

Matrix oriented(const Matrix& G) {
  return needs_transpose(G) ? Matrix(G.transpose()) : G;
}

SubspaceBasis init_from_gradient(const Matrix& G, Index rank) {
  linalg::require_nonempty(G, "init_from_gradient");
  const Index limit = std::min(G.rows(), G.cols());
  if (rank < 1 || rank > limit) {
    throw std::invalid_argument("init_from_gradient: rank " +
                                std::to_string(rank) + " outside [1, " +
                                std::to_string(limit) + "] for a " +
                                dims(G.rows(), G.cols()) + " gradient");
  }
  const bool transpose = needs_transpose(G);
  const linalg::SvdResult svd =
      transpose ? linalg::thin_svd(G.transpose()) : linalg::thin_svd(G);
  return SubspaceBasis{svd.U.leftCols(rank), transpose, 0};
}

Matrix project(const SubspaceBasis& S, const Matrix& G) {
  require_rows(S, G, "project");
  return S.basis.transpose() * G;
}

Matrix project_back(const SubspaceBasis& S, const Matrix& X) {
  if (X.rows() != S.rank()) {
    throw std::invalid_argument("project_back: basis rank " +
                                std::to_string(S.rank()) + " but operand is " +
                                dims(X.rows(), X.cols()));
  }
  return S.basis * X;
}

SubspaceFit residual_and_coeffs(const SubspaceBasis& S, const Matrix& G) {
  require_rows(S, G, "residual_and_coeffs");
  SubspaceFit fit;
  fit.coeffs = linalg::coeffs_orthonormal(S.basis, G);
  fit.residual = G - S.basis * fit.coeffs;
  return fit;
}

TangentRank1 tangent_rank1(const Matrix& residual, const Matrix& coeffs,
                           double tol, int max_iter) {
  if (residual.cols() != coeffs.cols()) {
    throw std::invalid_argument("tangent_rank1: residual " +
                                dims(residual.rows(), residual.cols()) +
                                " and coefficients " +
                                dims(coeffs.rows(), coeffs.cols()) +
                                " disagree on width");
  }
  const Matrix grad = -2.0 * residual * coeffs.transpose();
  const linalg::SingularTriplet top =
      linalg::top_singular_triplet(grad, tol, max_iter);
  return TangentRank1{top.u, top.sigma, top.v, top.converged};
}

TangentRank1 tangent_from_gradient(const SubspaceBasis& S, const Matrix& G,
                                   double tol, int max_iter) {
  require_rows(S, G, "tangent_from_gradient");
  // One pass over G in column blocks small enough to stay in cache while
  // both products are formed: G Aᵀ = Σ G_b A_bᵀ and A Aᵀ = Σ A_b A_bᵀ.
  constexpr Index kBlockBytes = 128 * 1024;
  const Index block =
      std::max<Index>(1, kBlockBytes / static_cast<Index>(sizeof(double) * std::max<Index>(1, G.rows())));
  const Index r = S.rank();
  Matrix g_at = Matrix::Zero(G.rows(), r);
  Matrix a_at = Matrix::Zero(r, r);
  Matrix a_b;
  for (Index j = 0; j < G.cols(); j += block) {
    const Index w = std::min(block, G.cols() - j);
    const auto g_b = G.middleCols(j, w);
    a_b.noalias() = S.basis.transpose() * g_b;
    g_at.noalias() += g_b * a_b.transpose();
    a_at.noalias() += a_b * a_b.transpose();
  }
  Matrix grad = g_at;
  grad.noalias() -= S.basis * a_at;
  grad *= -2.0;
  const linalg::SingularTriplet top = linalg::top_singular_triplet(grad, tol, max_iter);
  return TangentRank1{top.u, top.sigma, top.v, top.converged};
}

SubspaceBasis geodesic_step(const SubspaceBasis& S, const TangentRank1& T,
                            double eta, std::size_t at_step) {
  if (!(eta >= 0.0)) {
    throw std::invalid_argument("geodesic_step: eta must be >= 0");
  }
  if (T.u.size() != S.dim() || T.v.size() != S.rank()) {
    throw std::invalid_argument("geodesic_step: tangent (" +
                                std::to_string(T.u.size()) + ", " +
                                std::to_string(T.v.size()) +
                                ") does not match basis " +
                                dims(S.dim(), S.rank()));
  }
  SubspaceBasis next = S;
  next.last_update_step = at_step;
  const double angle = T.sigma * eta;
  if (angle == 0.0) return next;

  Vector u = T.u - S.basis * (S.basis.transpose() * T.u);
  const double un = u.norm();
  if (un < kMinHorizontalNorm) return next;
  u /= un;

  const Vector sv = S.basis * T.v;
  const Vector direction = sv * (std::cos(angle) - 1.0) - u * std::sin(angle);
  next.basis.noalias() += direction * T.v.transpose();

  const double drift = linalg::orthonormality_error(next.basis);
  if (drift > 1e-10 * static_cast<double>(S.rank())) {
    next.basis = linalg::orthonormalize(next.basis);
  }
  return next;
}

SubspaceBasis grassmann_exp_oracle(const SubspaceBasis& S, const Matrix& delta,
                                   double t) {
  const Index m = S.dim();
  const Index r = S.rank();
  if (delta.rows() != m || delta.cols() != r) {
    throw std::invalid_argument("grassmann_exp_oracle: tangent " +
                                dims(delta.rows(), delta.cols()) +
                                " does not match basis " + dims(m, r));
  }
  const double vertical = (S.basis.transpose() * delta).norm();
  if (vertical > 1e-6 * std::max(1.0, delta.norm())) {
    throw std::invalid_argument(
        "grassmann_exp_oracle: tangent is not horizontal (|SᵀΔ|_F = " +
        std::to_string(vertical) + ")");
  }
  if (r == m) return S;

  const Matrix complement = linalg::orthogonal_complement(S.basis);
  const Matrix block = complement.transpose() * delta;  // (m - r) x r

  Matrix generator = Matrix::Zero(m, m);
  generator.topRightCorner(r, m - r) = -block.transpose();
  generator.bottomLeftCorner(m - r, r) = block;

  Matrix frame(m, m);
  frame << S.basis, complement;

  const Matrix rotation = linalg::expm(t * generator);
  SubspaceBasis out = S;
  out.basis = frame * rotation.leftCols(r);
  return out;
}

}  // namespace subtrack::subspace
