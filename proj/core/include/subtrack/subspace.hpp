#pragma once

#include "subtrack/linalg.hpp"

#include <cstddef>

namespace subtrack {

/// Rank-r orthonormal basis of the tracked gradient subspace.
///
/// All tracker math runs with rows <= cols. When a parameter's gradient is
/// taller than it is wide, the engine feeds Gᵀ and records that here.
struct SubspaceBasis {
  Matrix basis;  // m x r, orthonormal columns
  bool transposed = false;
  std::size_t last_update_step = 0;

  Index dim() const { return basis.rows(); }
  Index rank() const { return basis.cols(); }
};

/// Rank-1 approximation u·sigma·vᵀ of the subspace-fit gradient ∇F.
/// u has length m and is orthogonal to the basis; v has length r.
struct TangentRank1 {
  Vector u;
  double sigma = 0.0;
  Vector v;
  bool converged = true;
};

struct SubspaceFit {
  Matrix coeffs;    // A = Sᵀ G, r x n
  Matrix residual;  // R = G − S A, m x n
};

namespace subspace {

/// Returns G or Gᵀ so that rows <= cols.
Matrix oriented(const Matrix& G);

/// True when G must be transposed before it reaches the tracker.
inline bool needs_transpose(const Matrix& G) { return G.rows() > G.cols(); }

/// Top-r left singular vectors of G (or of Gᵀ when G is tall).
SubspaceBasis init_from_gradient(const Matrix& G, Index rank);

/// Sᵀ G. G must already be oriented.
Matrix project(const SubspaceBasis& S, const Matrix& G);

/// S X.
Matrix project_back(const SubspaceBasis& S, const Matrix& X);

SubspaceFit residual_and_coeffs(const SubspaceBasis& S, const Matrix& G);

/// Top singular triplet of ∇F = −2 R Aᵀ.
TangentRank1 tangent_rank1(const Matrix& residual, const Matrix& coeffs,
                           double tol = linalg::kDefaultTripletTol,
                           int max_iter = linalg::kDefaultTripletMaxIter);

/// Same triplet as tangent_rank1(residual_and_coeffs(S, G)), computed as
/// −2 (G Aᵀ − S (A Aᵀ)) so the m x n residual is never formed.
TangentRank1 tangent_from_gradient(const SubspaceBasis& S, const Matrix& G,
                                   double tol = linalg::kDefaultTripletTol,
                                   int max_iter = linalg::kDefaultTripletMaxIter);

/// Moves S along the Grassmann geodesic in the descent direction −u σ vᵀ:
///
///   S' = (S v | u) [cos(σ η); −sin(σ η)] vᵀ + S (I − v vᵀ)
///
/// The left vector is re-projected onto the orthogonal complement of S
/// before use. If ‖S'ᵀS' − I‖_F drifts past 1e-10·r the result is repaired
/// with a sign-fixed thin QR. `at_step` is written to last_update_step.
SubspaceBasis geodesic_step(const SubspaceBasis& S, const TangentRank1& T,
                            double eta, std::size_t at_step);

inline SubspaceBasis geodesic_step(const SubspaceBasis& S,
                                   const TangentRank1& T, double eta) {
  return geodesic_step(S, T, eta, S.last_update_step);
}

/// Reference Grassmann exponential: Q·expm(t·[[0, −Bᵀ], [B, 0]]) restricted
/// to its first r columns, where Q = (S | S⊥) and B = S⊥ᵀ Δ. Dense m x m
/// work; intended for verification, not for the training loop.
SubspaceBasis grassmann_exp_oracle(const SubspaceBasis& S, const Matrix& delta,
                                   double t);

}  // namespace subspace
}  // namespace subtrack
