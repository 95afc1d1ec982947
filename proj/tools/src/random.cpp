#include "subtrack/bench/random.hpp"

namespace subtrack::bench {

Matrix gaussian_matrix(Rng& rng, Index rows, Index cols, double stddev) {
  std::normal_distribution<double> dist(0.0, stddev);
  Matrix M(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) M(i, j) = dist(rng);
  }
  return M;
}

Matrix random_orthonormal(Rng& rng, Index m, Index r) {
  return linalg::orthonormalize(gaussian_matrix(rng, m, r));
}

Matrix random_spd(Rng& rng, Index n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  const Matrix Q = random_orthonormal(rng, n, n);
  Vector lambda(n);
  for (Index i = 0; i < n; ++i) lambda(i) = dist(rng);
  Matrix S = Q * lambda.asDiagonal() * Q.transpose();
  return 0.5 * (S + S.transpose());
}

}  // namespace subtrack::bench
