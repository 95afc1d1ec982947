#include "subtrack/engine.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace subtrack {

namespace {

[[noreturn]] void reject(const std::string& param, const std::string& message) {
  throw std::invalid_argument("param '" + (param.empty() ? std::string("?") : param) +
                              "': " + message);
}

std::string dims(const Matrix& M) {
  return std::to_string(M.rows()) + "x" + std::to_string(M.cols());
}

void check_step_inputs(const Matrix& W, const Matrix& G, const std::string& name) {
  if (W.rows() != G.rows() || W.cols() != G.cols()) {
    reject(name, "weight " + dims(W) + " and gradient " + dims(G) + " differ in shape");
  }
  if (G.size() == 0) reject(name, "empty gradient");
  if (!G.allFinite()) reject(name, "gradient contains non-finite entries");
  if (!W.allFinite()) reject(name, "weight contains non-finite entries");
}

void ensure_initialized(ParamState& state, const Matrix& G,
                        const SubTrackConfig& cfg) {
  if (state.initialized()) {
    const bool transpose = subspace::needs_transpose(G);
    const Index rows = transpose ? G.cols() : G.rows();
    const Index cols = transpose ? G.rows() : G.cols();
    if (transpose != state.subspace.transposed || rows != state.subspace.dim() ||
        cols != state.moments.first.cols()) {
      reject(state.name, "gradient " + dims(G) + " does not match stored state");
    }
    return;
  }
  std::string name = std::move(state.name);
  state = init_param_state(G, cfg, std::move(name));
}

// Shared tail of both low-rank optimizers: Adam direction in the projected
// space, projection back, optional recovery, weight update.
void apply_lowrank_update(Matrix& W, const Matrix& g, const Matrix& low,
                          ParamState& state, const SubTrackConfig& cfg,
                          bool with_recovery, StepRecord& rec) {
  const Matrix direction = moments::regularized_direction(state.moments, cfg.eps);
  Matrix update = cfg.scale * subspace::project_back(state.subspace, direction);
  rec.lowrank_update_norm = update.norm();

  if (with_recovery) {
    const Vector phi = recovery::scaling_factors(low, direction, cfg.eps_phi);
    const Matrix lambda = recovery::correction_term(g, state.subspace, low, phi);
    recovery::LimitedCorrection limited =
        recovery::apply_limiter(lambda, state.recovery, cfg.zeta);
    state.recovery = limited.state;
    rec.lambda_norm = limited.lambda.norm();
    update += limited.lambda;
  }

  update *= cfg.alpha;
  rec.update_norm = update.norm();
  if (state.subspace.transposed) {
    W -= update.transpose();
  } else {
    W -= update;
  }
  ++state.step;
}

}  // namespace

ParamState init_param_state(const Matrix& G0, const SubTrackConfig& cfg,
                            std::string name) {
  cfg.validate();
  if (G0.size() == 0) reject(name, "empty gradient");
  if (!G0.allFinite()) reject(name, "gradient contains non-finite entries");
  const Index limit = std::min(G0.rows(), G0.cols());
  if (cfg.rank > limit) {
    reject(name, "rank " + std::to_string(cfg.rank) + " exceeds min dimension of " +
                     dims(G0));
  }
  ParamState state;
  state.name = std::move(name);
  state.subspace = subspace::init_from_gradient(G0, cfg.rank);
  const Index width = state.subspace.transposed ? G0.rows() : G0.cols();
  state.moments = LowRankMoments::zeros(cfg.rank, width);
  return state;
}

AdamState init_adam_state(Index rows, Index cols, std::string name) {
  return AdamState{std::move(name), Matrix::Zero(rows, cols),
                   Matrix::Zero(rows, cols), 0};
}

StepRecord subtrack_step(Matrix& W, const Matrix& G, ParamState& state,
                         const SubTrackConfig& cfg) {
  cfg.validate();
  check_step_inputs(W, G, state.name);
  ensure_initialized(state, G, cfg);

  const Matrix g = subspace::oriented(G);
  StepRecord rec;
  rec.param = state.name;
  rec.step = state.step;

  Matrix low;
  if (state.step % cfg.update_interval == 0) {
    const SubspaceBasis previous = state.subspace;
    const TangentRank1 tangent = subspace::tangent_from_gradient(
        previous, g, cfg.tangent_tol, cfg.tangent_max_iter);
    state.subspace = subspace::geodesic_step(previous, tangent, cfg.eta, state.step);
    low = subspace::project(state.subspace, g);
    if (cfg.pao_enabled) {
      state.moments = moments::projection_aware_update(
          state.moments, state.subspace, previous, low, cfg.beta1, cfg.beta2,
          cfg.variance_mode);
    } else {
      state.moments = moments::plain_update(state.moments, low, cfg.beta1, cfg.beta2);
    }
    rec.subspace_updated = true;
    rec.sigma = tangent.sigma;
  } else {
    low = subspace::project(state.subspace, g);
    state.moments = moments::plain_update(state.moments, low, cfg.beta1, cfg.beta2);
  }

  apply_lowrank_update(W, g, low, state, cfg, cfg.recovery_enabled, rec);
  return rec;
}

StepRecord galore_like_step(Matrix& W, const Matrix& G, ParamState& state,
                            const SubTrackConfig& cfg) {
  cfg.validate();
  check_step_inputs(W, G, state.name);
  ensure_initialized(state, G, cfg);

  const Matrix g = subspace::oriented(G);
  StepRecord rec;
  rec.param = state.name;
  rec.step = state.step;

  if (state.step % cfg.update_interval == 0) {
    SubspaceBasis fresh = subspace::init_from_gradient(G, cfg.rank);
    fresh.last_update_step = state.step;
    state.subspace = std::move(fresh);
    rec.subspace_updated = true;
  }
  const Matrix low = subspace::project(state.subspace, g);
  state.moments = moments::plain_update(state.moments, low, cfg.beta1, cfg.beta2);

  apply_lowrank_update(W, g, low, state, cfg, /*with_recovery=*/false, rec);
  return rec;
}

StepRecord full_adam_step(Matrix& W, const Matrix& G, AdamState& state,
                          const SubTrackConfig& cfg) {
  cfg.validate();
  check_step_inputs(W, G, state.name);
  if (state.first.size() == 0) {
    state.first = Matrix::Zero(G.rows(), G.cols());
    state.second = Matrix::Zero(G.rows(), G.cols());
  } else if (state.first.rows() != G.rows() || state.first.cols() != G.cols()) {
    reject(state.name, "gradient " + dims(G) + " does not match stored state");
  }

  StepRecord rec;
  rec.param = state.name;
  rec.step = state.steps;

  state.first = cfg.beta1 * state.first + (1.0 - cfg.beta1) * G;
  state.second = cfg.beta2 * state.second + (1.0 - cfg.beta2) * G.cwiseAbs2();
  ++state.steps;

  Matrix update;
  if (cfg.bias_correction) {
    const double t = static_cast<double>(state.steps);
    const double c1 = 1.0 - std::pow(cfg.beta1, t);
    const double c2 = 1.0 - std::pow(cfg.beta2, t);
    update = (state.first / c1).cwiseQuotient(
        ((state.second / c2).array() + cfg.eps).sqrt().matrix());
  } else {
    update = state.first.cwiseQuotient((state.second.array() + cfg.eps).sqrt().matrix());
  }
  update *= cfg.alpha;
  rec.update_norm = update.norm();
  rec.lowrank_update_norm = rec.update_norm;
  W -= update;
  return rec;
}

}  // namespace subtrack
