#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string_view>

namespace subtrack {

/// Dense real matrix. Storage is Eigen's default column-major layout with
/// 64-bit elements; checkpoints serialize in the same order.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

namespace linalg {

struct SvdResult {
  Matrix U;  // m x p, orthonormal columns
  Vector s;  // p singular values, descending
  Matrix V;  // n x p, orthonormal columns
};

struct SingularTriplet {
  Vector u;
  double sigma = 0.0;
  Vector v;
  bool converged = true;
  int iterations = 0;
};

inline constexpr double kDefaultTripletTol = 1e-10;
inline constexpr int kDefaultTripletMaxIter = 500;

/// Throws std::invalid_argument naming `what` if any element is NaN/Inf.
void require_finite(const Matrix& M, std::string_view what);

/// Throws std::invalid_argument if M is empty.
void require_nonempty(const Matrix& M, std::string_view what);

/// Thin SVD with p = min(m, n). Each U column is sign-fixed so that its first
/// entry of non-negligible magnitude is positive; V is flipped to match.
SvdResult thin_svd(const Matrix& M);

/// Largest singular triplet of M via power iteration on the Gram operator
/// MᵀM. The iteration squares the Gram power every sweep, so a spectral gap
/// g shrinks the off-axis component like (s₂/s₁)^(2^k). Starts from a fixed
/// pseudo-random vector; a zero matrix yields sigma = 0 with u = e₁, v = e₁.
SingularTriplet top_singular_triplet(const Matrix& M,
                                     double tol = kDefaultTripletTol,
                                     int max_iter = kDefaultTripletMaxIter);

/// A = Sᵀ G, the least-squares coefficients of G in the orthonormal basis S.
/// Rejects S when ‖SᵀS − I‖_F > 1e-8·r.
Matrix coeffs_orthonormal(const Matrix& S, const Matrix& G);

/// Matrix exponential (scaling and squaring with Padé approximants).
Matrix expm(const Matrix& X);

/// ‖SᵀS − I‖_F.
double orthonormality_error(const Matrix& S);

/// Thin QR of a full-column-rank matrix with the R diagonal made positive,
/// so an already-orthonormal input is returned (almost) unchanged.
Matrix orthonormalize(const Matrix& S);

/// An m x (m - r) orthonormal completion of the columns of S.
Matrix orthogonal_complement(const Matrix& S);

/// ‖P_a − P_b‖_F for the projectors onto span(A) and span(B); both inputs
/// must have orthonormal columns. Equal ranks use
/// ‖AAᵀ − BBᵀ‖_F = √2·‖A − B(BᵀA)‖_F, which avoids the cancellation of the
/// trace form at small distances.
double projector_distance(const Matrix& A, const Matrix& B);

}  // namespace linalg
}  // namespace subtrack
