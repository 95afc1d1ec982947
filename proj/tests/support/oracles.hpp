#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library's numerical code; each oracle takes a different route to the
// same quantity (eigendecomposition instead of SVD, explicit loops instead of
// matrix expressions, normal equations instead of orthonormal projection).

#include "subtrack/linalg.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using subtrack::Index;
using subtrack::Matrix;
using subtrack::Vector;

// Seeded generators for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  Index integer(Index lo, Index hi) {  // inclusive
    return std::uniform_int_distribution<Index>(lo, hi)(rng_);
  }
  Matrix matrix(Index rows, Index cols, double scale = 1.0);
  Vector vector(Index n) { return matrix(n, 1).col(0); }
  // Modified Gram-Schmidt on a Gaussian matrix, done by hand.
  Matrix orthonormal(Index m, Index r);
  Vector unit(Index n) { return vector(n).normalized(); }

 private:
  std::mt19937_64 rng_;
};

// Singular values of M from the eigenvalues of MᵀM (or MMᵀ, whichever is
// smaller), descending, clamped at zero.
Vector singular_values_via_gram(const Matrix& M);

// Top right singular vector from the eigendecomposition of MᵀM.
Vector top_right_vector_via_gram(const Matrix& M);

// Least-squares coefficients from the normal equations (SᵀS) A = Sᵀ G,
// solved with a column-pivoted QR of SᵀS.
Matrix least_squares(const Matrix& S, const Matrix& G);

// ‖AAᵀ − BBᵀ‖_F formed explicitly.
double projector_gap(const Matrix& A, const Matrix& B);

// ‖G − S (SᵀS)⁻¹ Sᵀ G‖²_F, the cost F(S) minimised over A.
double fit_cost(const Matrix& S, const Matrix& G);

// Projection-aware moment update written out scalar by scalar:
//   M'_ij = β₁ Σ_k Q_ik M_kj + (1−β₁) G_ij
//   V'_ij = β₂ (1−β₂^{t−1}) h(Σ_k Q_ik² (V_kj − M_kj²) + (Σ_k Q_ik M_kj)²)
//           + (1−β₂) G_ij²
struct ScalarMoments {
  Matrix M, V;
};
ScalarMoments pao_by_hand(const Matrix& Q, const Matrix& M, const Matrix& V,
                          const Matrix& G, double beta1, double beta2, double t,
                          bool clip);

// Element-wise Adam on a matrix, one scalar at a time, ε inside the root,
// no bias correction unless asked.
class ScalarAdam {
 public:
  ScalarAdam(Index rows, Index cols, double alpha, double beta1, double beta2, double eps,
             bool bias_correction = false);
  void step(Matrix& W, const Matrix& G);

 private:
  Matrix m_, v_;
  double alpha_, beta1_, beta2_, eps_;
  bool bias_;
  int t_ = 0;
};

// Central differences of f at x with step h.
Vector central_gradient(const std::function<double(const Vector&)>& f, const Vector& x,
                        double h);

// Reference Ackley value, loop form.
double ackley_by_hand(const Vector& x);

}  // namespace oracle
