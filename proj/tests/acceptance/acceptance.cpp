// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned
// below. Exits nonzero if any criterion fails.

#include "oracles.hpp"

#include "subtrack/bench/ackley.hpp"
#include "subtrack/bench/complexity.hpp"
#include "subtrack/bench/contraction.hpp"
#include "subtrack/bench/mlp.hpp"
#include "subtrack/checkpoint.hpp"
#include "subtrack/engine.hpp"
#include "subtrack/moments.hpp"
#include "subtrack/optimizer.hpp"
#include "subtrack/recovery.hpp"
#include "subtrack/subspace.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace subtrack;
using oracle::Gen;

namespace {

// Pinned tolerances and budgets.
constexpr double kGeodesicVsOracle = 1e-8;
constexpr double kGeodesicBudgetS = 30.0;
constexpr double kChainOrthoPerRank = 1e-7;
constexpr double kChainBudgetS = 10.0;
constexpr double kSlopeRel = 1e-3;
constexpr double kFullRankAbs = 1e-10;
constexpr double kLimiterOrtho = 1e-9;
constexpr double kContractionFinal = 1e-3;
constexpr double kContractionRateRel = 0.10;
constexpr double kContractionBudgetS = 60.0;
constexpr double kAckleyTarget = 0.5;
constexpr double kAckleyBudgetS = 10.0;
constexpr double kSlopeLo = 0.8, kSlopeHi = 1.2;
constexpr double kComplexityBudgetS = 300.0;
constexpr double kAdamSlack = 1.10;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("%s [%d] %s: %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void note(const std::string& line) {
  std::printf("     %s\n", line.c_str());
  std::fflush(stdout);
}

SubspaceBasis basis_of(const Matrix& B) { return SubspaceBasis{B, false, 0}; }

// Random gradient fit for a basis: returns the tangent of the fit cost.
TangentRank1 random_tangent(Gen& gen, const SubspaceBasis& S, Index n) {
  const Matrix G = gen.matrix(S.dim(), n);
  const auto fit = subspace::residual_and_coeffs(S, G);
  return subspace::tangent_rank1(fit.residual, fit.coeffs);
}

void geodesic_correctness() {
  const auto t0 = Clock::now();
  Gen gen(1001);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Index m = gen.integer(2, 64), r = gen.integer(1, m - 1), n = gen.integer(1, 32);
    const auto S = basis_of(gen.orthonormal(m, r));
    const auto T = random_tangent(gen, S, n);
    const double eta = std::pow(10.0, gen.uniform(-4.0, 0.0)) / std::max(T.sigma, 1e-12);
    const auto next = subspace::geodesic_step(S, T, eta);
    const Matrix descent = -T.u * T.sigma * T.v.transpose();
    const auto ref = subspace::grassmann_exp_oracle(S, descent, eta);
    worst = std::max(worst, oracle::projector_gap(next.basis, ref.basis));
  }
  const double secs = seconds_since(t0);
  report(1, "geodesic vs matrix-exponential oracle",
         worst <= kGeodesicVsOracle && secs < kGeodesicBudgetS,
         fmt::format("1000 cases, max projector gap {:.3g} (tol {:g}), {:.2f} s (budget {:g} s)",
                     worst, kGeodesicVsOracle, secs, kGeodesicBudgetS));
}

void orthonormality_persistence() {
  const auto t0 = Clock::now();
  Gen gen(1002);
  const Index m = 32, r = 4, n = 16;
  auto S = basis_of(gen.orthonormal(m, r));
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto T = random_tangent(gen, S, n);
    const double eta = gen.uniform(0.0, 1.0) / std::max(T.sigma, 1e-12);
    S = subspace::geodesic_step(S, T, eta);
    worst = std::max(worst, linalg::orthonormality_error(S.basis));
  }
  const double secs = seconds_since(t0);
  const double tol = kChainOrthoPerRank * static_cast<double>(r);
  report(2, "orthonormality over 10000 chained steps", worst <= tol && secs < kChainBudgetS,
         fmt::format("m={} r={}, max ||BtB - I||_F {:.3g} (tol {:g}), {:.2f} s (budget {:g} s)",
                     m, r, worst, tol, secs, kChainBudgetS));
}

void descent_direction() {
  Gen gen(1003);
  double worst = 0.0;
  int cases = 0;
  while (cases < 200) {
    const Index m = gen.integer(3, 24), r = gen.integer(1, m - 1), n = gen.integer(2, 16);
    const auto S = basis_of(gen.orthonormal(m, r));
    const Matrix G = gen.matrix(m, n);
    const auto fit = subspace::residual_and_coeffs(S, G);
    const auto T = subspace::tangent_rank1(fit.residual, fit.coeffs);
    if (T.sigma < 1e-3) continue;
    const double f0 = oracle::fit_cost(S.basis, G);
    auto slope = [&](double h) {
      return (oracle::fit_cost(subspace::geodesic_step(S, T, h).basis, G) - f0) / h;
    };
    const double h = 1e-5 / T.sigma;
    const double est = 2.0 * slope(h) - slope(2.0 * h);
    const double expected = -T.sigma * T.sigma;
    worst = std::max(worst, std::abs(est - expected) / std::abs(expected));
    ++cases;
  }
  report(3, "finite-difference slope equals -sigma^2", worst <= kSlopeRel,
         fmt::format("200 cases, max relative error {:.3g} (tol {:g})", worst, kSlopeRel));
}

// Runs subtrack (r = min(m, n), η = 0, no PAO, no recovery, scale 1) next to
// scalar Adam and returns the largest element-wise gap over `steps`.
double full_rank_gap(Gen& gen, Index m, Index n, const Matrix* first_grad, int steps) {
  SubTrackConfig cfg;
  cfg.rank = std::min(m, n);
  cfg.eta = 0.0;
  cfg.pao_enabled = false;
  cfg.recovery_enabled = false;
  cfg.scale = 1.0;
  cfg.alpha = 1e-2;
  cfg.update_interval = 1;
  Matrix W = gen.matrix(m, n), W_ref = W;
  ParamState st;
  oracle::ScalarAdam adam(m, n, cfg.alpha, cfg.beta1, cfg.beta2, cfg.eps);
  double worst = 0.0;
  for (int t = 0; t < steps; ++t) {
    const Matrix G = (t == 0 && first_grad) ? *first_grad : gen.matrix(m, n);
    subtrack_step(W, G, st, cfg);
    adam.step(W_ref, G);
    worst = std::max(worst, (W - W_ref).cwiseAbs().maxCoeff());
  }
  return worst;
}

void full_rank_equivalence() {
  Gen gen(1004);
  double worst = 0.0;
  for (int p = 0; p < 20; ++p) {
    const Index m = gen.integer(2, 10), n = gen.integer(2, 10);
    worst = std::max(worst, full_rank_gap(gen, m, n, nullptr, 50));
  }
  report(4, "full-rank equivalence with Adam on random problems", worst <= kFullRankAbs,
         fmt::format("20 problems x 50 steps, max |W - W_adam| {:.3g} (tol {:g})", worst,
                     kFullRankAbs));

  // Diagnostics: the same comparison with an axis-aligned basis.
  double aligned = 0.0;
  for (int p = 0; p < 20; ++p) {
    const Index m = gen.integer(2, 10), n = gen.integer(m, 12);
    Matrix G0 = Matrix::Zero(m, n);
    for (Index i = 0; i < m; ++i) G0(i, i) = static_cast<double>(m - i) * (i % 2 ? -1.0 : 1.0);
    aligned = std::max(aligned, full_rank_gap(gen, m, n, &G0, 50));
  }
  note(fmt::format("axis-aligned first gradient (basis = signed permutation): max gap {:.3g}",
                   aligned));
  note("element-wise second moments do not commute with a dense rotation of the rows, so");
  note("the projected optimizer equals Adam in the rotated coordinates, not in the original");
}

void pao_identity() {
  Gen gen(1005);
  bool exact = true;
  for (int i = 0; i < 200; ++i) {
    const Index m = gen.integer(2, 12), r = gen.integer(1, m), n = gen.integer(1, 8);
    Matrix axes = Matrix::Identity(m, r);
    const auto S = basis_of(axes);
    const Matrix M = gen.matrix(r, n);
    const Matrix V = gen.matrix(r, n).cwiseAbs() + gen.uniform(0, 2) * M.cwiseAbs2();
    const Matrix G = gen.matrix(r, n);
    const std::size_t steps = static_cast<std::size_t>(gen.integer(0, 100));
    const double b1 = gen.uniform(0.0, 0.99), b2 = gen.uniform(0.0, 0.9999);
    const auto mode = i % 2 ? VarianceMode::clip : VarianceMode::abs;
    const LowRankMoments st{M, V, steps};
    const auto pao = moments::projection_aware_update(st, S, S, G, b1, b2, mode);
    const auto plain = moments::plain_update(st, G, b1, b2);
    const double history = 1.0 - std::pow(b2, static_cast<double>(steps));
    const Matrix expected = b2 * history * V + (1.0 - b2) * G.cwiseAbs2();
    exact = exact && pao.first == plain.first && pao.second == expected;
  }

  bool nonneg = true;
  for (auto mode : {VarianceMode::abs, VarianceMode::clip}) {
    const Index m = 10, r = 3, n = 6;
    auto S = basis_of(gen.orthonormal(m, r));
    auto st = LowRankMoments::zeros(r, n);
    for (int i = 0; i < 10000; ++i) {
      const auto S_new = basis_of(gen.orthonormal(m, r));
      const Matrix G = gen.matrix(r, n, std::pow(10.0, gen.uniform(-3, 3)));
      st = moments::projection_aware_update(st, S_new, S, G, 0.9, 0.999, mode);
      S = S_new;
      nonneg = nonneg && st.second.minCoeff() >= 0.0;
    }
  }
  report(5, "projection-aware update reduces exactly at Q = I; V >= 0", exact && nonneg,
         fmt::format("200 identity cases bit-exact: {}; 2 x 10000 random updates V >= 0: {}",
                     exact ? "yes" : "no", nonneg ? "yes" : "no"));
}

void limiter_contract() {
  Gen gen(1006);
  bool growth_ok = true;
  double worst_ortho = 0.0;
  for (int seq = 0; seq < 100; ++seq) {
    const Index m = gen.integer(3, 24), r = gen.integer(1, m - 1), n = gen.integer(1, 16);
    const double zeta = gen.uniform(1.0, 1.5);
    RecoveryState state;
    double prev = 0.0;
    for (int t = 0; t < 200; ++t) {
      const auto S = basis_of(gen.orthonormal(m, r));
      // Magnitudes jump by many orders; some gradients sit almost in span(S).
      const double mag = std::pow(10.0, gen.uniform(-8, 8));
      const double outside = gen.integer(0, 3) == 0 ? 1e-10 : 1.0;
      const Matrix G = mag * (S.basis * gen.matrix(r, n) + outside * gen.matrix(m, n));
      const Matrix low = subspace::project(S, G);
      const Matrix opt = low * gen.uniform(0.0, 1e3);
      const Vector phi = recovery::scaling_factors(low, opt);
      const Matrix lambda = recovery::correction_term(G, S, low, phi);
      const auto out = recovery::apply_limiter(lambda, state, zeta);
      const double norm = out.lambda.norm();
      if (t > 0 && norm > zeta * prev) growth_ok = false;
      if (norm > 0.0) {
        worst_ortho = std::max(worst_ortho, (S.basis.transpose() * out.lambda).norm() / norm);
      }
      state = out.state;
      prev = norm;
    }
  }
  report(6, "recovery limiter contract", growth_ok && worst_ortho <= kLimiterOrtho,
         fmt::format("100 sequences x 200 steps, growth bound held: {}, max ||S^T L'||/||L'|| "
                     "{:.3g} (tol {:g})",
                     growth_ok ? "yes" : "no", worst_ortho, kLimiterOrtho));
}

void contraction() {
  const auto t0 = Clock::now();
  bench::ContractionOptions opts;  // m 8, n 12, r 3, 2000 steps, seed 0
  const auto tr = bench::run_contraction(opts);
  const std::size_t burn_in = 10;
  bool monotone = true;
  for (std::size_t t = burn_in + 1; t < tr.p_norm.size(); ++t) {
    monotone = monotone && tr.p_norm[t] < tr.p_norm[t - 1];
  }
  const double ratio = tr.p_norm.back() / tr.p_norm.front();
  const double fit = bench::fitted_rate(tr.p_norm, burn_in, opts.steps);
  // Compare per-step contraction amounts, 1 − rate, so the tolerance means
  // something when the rate itself is close to 1.
  const double predicted = tr.mu * tr.kappa;
  const double rel = std::abs((1.0 - fit) - predicted) / predicted;
  const double secs = seconds_since(t0);
  report(7, "projected-gradient contraction",
         monotone && ratio < kContractionFinal && rel <= kContractionRateRel &&
             secs < kContractionBudgetS,
         fmt::format("monotone after {} steps: {}, final/initial {:.3g} (tol {:g}), fitted rate "
                     "{:.6f} vs predicted {:.6f} (contraction off by {:.2g}%, tol {:g}%), {:.2f} s",
                     burn_in, monotone ? "yes" : "no", ratio, kContractionFinal, fit,
                     tr.predicted_rate, 100 * rel, 100 * kContractionRateRel, secs));
}

void ackley() {
  const auto t0 = Clock::now();
  auto cfg1 = bench::ackley_default_config();
  cfg1.scale = 1.0;
  auto cfg3 = cfg1;
  cfg3.scale = 3.0;
  const auto sub1 = bench::run_ackley(Method::subtrack, cfg1);
  const auto gl1 = bench::run_ackley(Method::galore_like, cfg1);
  const auto gl3 = bench::run_ackley(Method::galore_like, cfg3);
  const double secs = seconds_since(t0);
  const bool reach = sub1.final_f() < kAckleyTarget;
  const bool baseline_worse = gl1.final_f() > sub1.final_f();
  const bool jumpier = gl3.max_jump() > gl1.max_jump();
  report(8, "Ackley qualitative behaviour",
         reach && baseline_worse && jumpier && secs < kAckleyBudgetS,
         fmt::format("subtrack SF=1 final f {:.4g} (< {:g}); periodic SVD SF=1 final f {:.4g}; "
                     "max jump SF=3 {:.4g} vs SF=1 {:.4g}; {:.2f} s",
                     sub1.final_f(), kAckleyTarget, gl1.final_f(), gl3.max_jump(),
                     gl1.max_jump(), secs));
}

void memory_contract() {
  Gen gen(1009);
  bool ok = true;
  std::string detail;
  std::uint64_t scalars = 0;
  for (auto [m, n, r] : {std::tuple<Index, Index, Index>{4, 4, 1}, {8, 32, 4}, {16, 64, 8},
                         {64, 64, 16}, {33, 17, 5}}) {
    SubTrackConfig cfg;
    cfg.rank = r;
    Optimizer opt(Method::subtrack, cfg);
    Matrix W = gen.matrix(m, n);
    opt.step("w", W, gen.matrix(m, n));
    std::stringstream buf;
    write_checkpoint(buf, opt.checkpoint());
    const auto blocks = inspect_checkpoint(buf);
    const auto mm = static_cast<std::uint64_t>(std::min(m, n));
    const auto nn = static_cast<std::uint64_t>(std::max(m, n));
    const auto rr = static_cast<std::uint64_t>(r);
    const std::uint64_t expected = mm * rr + 2 * nn * rr;
    const bool this_ok = blocks.size() == 1 && blocks[0].matrix_elements == expected &&
                         opt.state_element_count("w") == expected &&
                         (scalars == 0 || blocks[0].scalar_fields == scalars);
    if (!blocks.empty()) scalars = blocks[0].scalar_fields;
    ok = ok && this_ok;
    detail += fmt::format("{}x{} r={}: {} elements (mr+2nr = {}); ", m, n, r,
                          blocks.empty() ? 0 : blocks[0].matrix_elements, expected);
  }
  report(9, "serialized state holds mr + 2nr elements", ok,
         detail + fmt::format("{} scalar fields per block", scalars));
}

void complexity() {
  const auto t0 = Clock::now();
  bench::ComplexityOptions opts;  // m 256, r {4, 8}, n 256..2048, 21 reps
  const auto rows = bench::run_complexity(opts);
  const double secs = seconds_since(t0);
  bool ok = secs < kComplexityBudgetS;
  std::string detail;
  for (Index r : opts.ranks) {
    const double track = bench::loglog_slope(rows, "tracking", r);
    const double svd = bench::loglog_slope(rows, "svd", r);
    ok = ok && track >= kSlopeLo && track <= kSlopeHi && track < svd;
    detail += fmt::format("r={}: tracking slope {:.3f} (in [{:g}, {:g}]), svd slope {:.3f}; ", r,
                          track, kSlopeLo, kSlopeHi, svd);
  }
  report(10, "subspace-update time scaling in n", ok,
         detail + fmt::format("{:.1f} s (budget {:g} s)", secs, kComplexityBudgetS));
  for (const auto& row : rows) {
    if (row.n == opts.widths.back()) {
      note(fmt::format("n={} r={} {}: {:.3g} ms", row.n, row.r, row.method,
                       1e3 * row.median_seconds));
    }
  }
}

void ablation() {
  const auto t0 = Clock::now();
  const bench::MlpOptions opts;
  const auto runs = bench::run_mlp_grid(bench::ablation_variants(bench::mlp_default_config()),
                                        opts, 1, 5, 1);
  auto med = [&](const char* v) { return bench::median_final_loss(runs, v); };
  const double only = med("tracking_only"), pao = med("tracking_pao"),
               rec = med("tracking_recovery"), full = med("subtrack_full"),
               adam = med("full_adam");
  const bool ok = full <= pao && pao <= only && full <= rec && rec <= only &&
                  full <= kAdamSlack * adam;
  report(11, "ablation ordering on the tiny MLP", ok,
         fmt::format("median final loss over 5 seeds: tracking_only {:.4g}, tracking_pao {:.4g}, "
                     "tracking_recovery {:.4g}, subtrack_full {:.4g}, full_adam {:.4g} "
                     "(full <= {:.2f} x adam); initial {:.4g}; {:.1f} s",
                     only, pao, rec, full, adam, kAdamSlack, runs.front().run.loss.front(),
                     seconds_since(t0)));
}

}  // namespace

int main() {
  const std::function<void()> criteria[] = {
      geodesic_correctness, orthonormality_persistence, descent_direction,
      full_rank_equivalence, pao_identity, limiter_contract, contraction,
      ackley, memory_contract, complexity, ablation};
  for (const auto& c : criteria) {
    try {
      c();
    } catch (const std::exception& e) {
      std::printf("FAIL criterion threw: %s\n", e.what());
      ++failures;
    }
  }
  std::printf("%d of %zu criteria failed\n", failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
