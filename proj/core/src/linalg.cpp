#include "subtrack/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace subtrack::linalg {

namespace {

std::string dims(const Matrix& M) {
  return std::to_string(M.rows()) + "x" + std::to_string(M.cols());
}

// Entries below this magnitude are skipped when picking the sign-defining
// entry of a singular vector; anything smaller is rounding noise for a unit
// vector.
constexpr double kSignThreshold = 1.4901161193847656e-08;  // sqrt(eps)

constexpr std::uint64_t kTripletSeed = 0x5eedb0a7c0ffeeULL;

Vector unit_vector(Index n, Index i = 0) {
  Vector e = Vector::Zero(n);
  e(i) = 1.0;
  return e;
}

Vector start_vector(Index n) {
  std::mt19937_64 rng(kTripletSeed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v.normalized();
}

}  // namespace

void require_finite(const Matrix& M, std::string_view what) {
  if (!M.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": matrix (" + dims(M) +
                                ") contains non-finite entries");
  }
}

void require_nonempty(const Matrix& M, std::string_view what) {
  if (M.rows() < 1 || M.cols() < 1) {
    throw std::invalid_argument(std::string(what) + ": empty matrix (" +
                                dims(M) + ")");
  }
}

SvdResult thin_svd(const Matrix& M) {
  require_nonempty(M, "thin_svd");
  require_finite(M, "thin_svd");

  Eigen::BDCSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdResult out{svd.matrixU(), svd.singularValues(), svd.matrixV()};

  for (Index j = 0; j < out.U.cols(); ++j) {
    for (Index i = 0; i < out.U.rows(); ++i) {
      const double x = out.U(i, j);
      if (std::abs(x) > kSignThreshold) {
        if (x < 0.0) {
          out.U.col(j) *= -1.0;
          out.V.col(j) *= -1.0;
        }
        break;
      }
    }
  }
  return out;
}

SingularTriplet top_singular_triplet(const Matrix& M, double tol,
                                     int max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("top_singular_triplet: tol must be > 0");
  if (max_iter < 1) throw std::invalid_argument("top_singular_triplet: max_iter must be >= 1");
  require_nonempty(M, "top_singular_triplet");
  require_finite(M, "top_singular_triplet");

  SingularTriplet out;
  const Matrix gram = M.transpose() * M;
  const double gram_scale = gram.cwiseAbs().maxCoeff();
  if (gram_scale == 0.0) {
    out.u = unit_vector(M.rows());
    out.v = unit_vector(M.cols());
    out.sigma = 0.0;
    return out;
  }

  Vector v = start_vector(M.cols());
  Matrix power = gram / gram_scale;
  out.converged = false;
  for (int iter = 1; iter <= max_iter; ++iter) {
    out.iterations = iter;
    Vector w = power * v;
    double wn = w.norm();
    if (wn == 0.0) {
      // Start vector fell in the null space of the current power; restart
      // from its dominant column.
      Index j = 0;
      power.colwise().norm().maxCoeff(&j);
      w = power.col(j);
      wn = w.norm();
    }
    v = w / wn;

    const Vector gv = gram * v;
    const double lambda = v.dot(gv);
    const double residual = (gv - lambda * v).norm();
    if (residual <= tol * gram_scale) {
      out.converged = true;
      break;
    }
    power = power * power;
    power /= power.cwiseAbs().maxCoeff();
  }

  Vector mv = M * v;
  out.sigma = mv.norm();
  out.v = v;
  out.u = out.sigma > 0.0 ? Vector(mv / out.sigma) : unit_vector(M.rows());
  return out;
}

double orthonormality_error(const Matrix& S) {
  const Index r = S.cols();
  return (S.transpose() * S - Matrix::Identity(r, r)).norm();
}

Matrix coeffs_orthonormal(const Matrix& S, const Matrix& G) {
  require_nonempty(S, "coeffs_orthonormal");
  if (S.rows() != G.rows()) {
    throw std::invalid_argument("coeffs_orthonormal: basis " + dims(S) +
                                " incompatible with " + dims(G));
  }
  const double err = orthonormality_error(S);
  if (err > 1e-8 * static_cast<double>(S.cols())) {
    throw std::invalid_argument(
        "coeffs_orthonormal: basis is not orthonormal (|SᵀS - I|_F = " +
        std::to_string(err) + ")");
  }
  return S.transpose() * G;
}

Matrix expm(const Matrix& X) {
  if (X.rows() != X.cols()) {
    throw std::invalid_argument("expm: matrix must be square, got " + dims(X));
  }
  require_nonempty(X, "expm");
  require_finite(X, "expm");
  return X.exp();
}

Matrix orthonormalize(const Matrix& S) {
  const Index m = S.rows();
  const Index r = S.cols();
  Eigen::HouseholderQR<Matrix> qr(S);
  Matrix Q = qr.householderQ() * Matrix::Identity(m, r);
  for (Index j = 0; j < r; ++j) {
    if (qr.matrixQR()(j, j) < 0.0) Q.col(j) *= -1.0;
  }
  return Q;
}

Matrix orthogonal_complement(const Matrix& S) {
  const Index m = S.rows();
  const Index r = S.cols();
  if (r > m) throw std::invalid_argument("orthogonal_complement: more columns than rows");
  Eigen::HouseholderQR<Matrix> qr(S);
  const Matrix Q = qr.householderQ();
  return Q.rightCols(m - r);
}

double projector_distance(const Matrix& A, const Matrix& B) {
  if (A.rows() != B.rows()) {
    throw std::invalid_argument("projector_distance: row mismatch " + dims(A) +
                                " vs " + dims(B));
  }
  if (A.cols() == B.cols()) {
    return std::sqrt(2.0) * (A - B * (B.transpose() * A)).norm();
  }
  return (A * A.transpose() - B * B.transpose()).norm();
}

}  // namespace subtrack::linalg
