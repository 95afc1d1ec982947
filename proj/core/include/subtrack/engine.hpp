#pragma once

#include "subtrack/config.hpp"
#include "subtrack/linalg.hpp"
#include "subtrack/moments.hpp"
#include "subtrack/recovery.hpp"
#include "subtrack/subspace.hpp"

#include <cstddef>
#include <string>

namespace subtrack {

/// Everything the low-rank optimizers keep for one weight matrix.
struct ParamState {
  std::string name;
  SubspaceBasis subspace;
  LowRankMoments moments;
  RecoveryState recovery;
  std::size_t step = 0;

  bool initialized() const { return subspace.basis.size() > 0; }
};

/// Full-rank Adam state, used by the baseline and for parameters too small
/// for projection (vectors, biases).
struct AdamState {
  std::string name;
  Matrix first;
  Matrix second;
  std::size_t steps = 0;
};

/// Per-step diagnostics handed to a StepLogSink.
struct StepRecord {
  std::string param;
  std::size_t step = 0;
  bool subspace_updated = false;
  double sigma = 0.0;                // top singular value of ∇F (0 when not updated)
  double lowrank_update_norm = 0.0;  // ‖scale · Ĝ‖_F
  double lambda_norm = 0.0;          // ‖Λ'‖_F after the limiter
  double update_norm = 0.0;          // ‖W' − W‖_F
};

/// Basis from the first gradient, zero moments, no recovery history.
ParamState init_param_state(const Matrix& G0, const SubTrackConfig& cfg,
                            std::string name = {});

AdamState init_adam_state(Index rows, Index cols, std::string name = {});

/// One step of the tracked-subspace optimizer on W (in place).
///
/// Every `update_interval` steps (starting at step 0) the basis moves one
/// rank-1 geodesic step toward the current gradient and the moments are
/// rotated into the new coordinates (or updated plainly when PAO is off).
/// Then W ← W − α·scale·S(M ⊘ √(V+ε)) − α·Λ', where Λ' is the limited
/// recovery term (zero when recovery is disabled).
StepRecord subtrack_step(Matrix& W, const Matrix& G, ParamState& state,
                         const SubTrackConfig& cfg);

/// Periodic-SVD baseline: every `update_interval` steps the basis is replaced
/// by the top-r singular vectors of the current gradient. Moments carry over
/// unrotated and recovery is never applied.
StepRecord galore_like_step(Matrix& W, const Matrix& G, ParamState& state,
                            const SubTrackConfig& cfg);

/// Textbook Adam with ε inside the square root; bias correction only when
/// cfg.bias_correction is set. `scale` is not applied.
StepRecord full_adam_step(Matrix& W, const Matrix& G, AdamState& state,
                          const SubTrackConfig& cfg);

}  // namespace subtrack
