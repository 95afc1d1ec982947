#include "subtrack/bench/contraction.hpp"

#include "subtrack/bench/csv.hpp"
#include "subtrack/bench/random.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace subtrack::bench {

namespace {

Vector sym_eigenvalues(const Matrix& S) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(S, Eigen::EigenvaluesOnly);
  return es.eigenvalues();  // ascending
}

}  // namespace

ContractionTrace run_contraction(const ContractionOptions& opts) {
  if (opts.m < 1 || opts.n < 1 || opts.r < 1 || opts.r > opts.m || opts.r > opts.n) {
    throw std::invalid_argument("contraction: need 1 <= r <= min(m, n)");
  }
  if (!(opts.spd_lo > 0.0 && opts.spd_hi >= opts.spd_lo)) {
    throw std::invalid_argument("contraction: need 0 < spd_lo <= spd_hi");
  }
  if (!(opts.mu_fraction >= 0.0 && opts.mu_fraction <= 1.0)) {
    throw std::invalid_argument("contraction: mu_fraction must lie in [0, 1]");
  }

  Rng rng(opts.seed);
  ContractionTrace tr;
  tr.B = random_spd(rng, opts.m, opts.spd_lo, opts.spd_hi);
  tr.C = random_spd(rng, opts.n, opts.spd_lo, opts.spd_hi);
  tr.left = random_orthonormal(rng, opts.m, opts.r);
  tr.right = random_orthonormal(rng, opts.n, opts.r);
  tr.A = opts.with_offset ? gaussian_matrix(rng, opts.m, opts.n)
                          : Matrix::Zero(opts.m, opts.n);
  tr.W0 = tr.left * gaussian_matrix(rng, opts.r, opts.r) * tr.right.transpose();

  const Vector eb = sym_eigenvalues(tr.left.transpose() * tr.B * tr.left);
  const Vector ec = sym_eigenvalues(tr.right.transpose() * tr.C * tr.right);
  tr.mu = opts.mu_fraction / (eb(eb.size() - 1) * ec(ec.size() - 1));
  tr.kappa = eb(0) * ec(0);
  tr.predicted_rate = 1.0 - tr.mu * tr.kappa;

  Matrix W = tr.W0;
  tr.p_norm.reserve(opts.steps + 1);
  for (std::size_t t = 0;; ++t) {
    const Matrix G = tr.A + tr.B * W * tr.C;
    const Matrix P = tr.left.transpose() * G * tr.right;
    tr.p_norm.push_back(P.norm());
    if (t == opts.steps) break;
    W -= tr.mu * tr.left * P * tr.right.transpose();
  }
  return tr;
}

double fitted_rate(const std::vector<double>& p_norm, std::size_t first, std::size_t last) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0, k = 0;
  for (std::size_t t = first; t <= last && t < p_norm.size(); ++t) {
    const double v = p_norm[t];
    if (!(v > 0.0) || !std::isfinite(v)) continue;
    const double x = static_cast<double>(t), y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    k += 1;
  }
  if (k < 2) throw std::invalid_argument("fitted_rate: fewer than two usable points");
  const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  return std::exp(slope);
}

void write_contraction_csv(std::ostream& out, const ContractionTrace& trace) {
  CsvWriter csv(out, {"step", "p_norm"});
  for (std::size_t t = 0; t < trace.p_norm.size(); ++t) csv.row() << t << trace.p_norm[t];
}

}  // namespace subtrack::bench
