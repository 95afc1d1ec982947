#pragma once

#include "subtrack/config.hpp"
#include "subtrack/linalg.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace subtrack::bench {

/// Two-layer perceptron in → hidden (tanh) → 1 fitted to a synthetic
/// regression target produced by a smaller random teacher network. Full
/// batch, mean squared error. Only the hidden weight matrix is large enough
/// for the low-rank path; the output row and the biases fall back to Adam.
struct MlpOptions {
  Index inputs = 64;
  Index hidden = 32;
  Index teacher_hidden = 8;
  Index samples = 1024;
  double noise = 0.1;
  std::size_t steps = 200;
  std::size_t warmup_steps = 0;
};

struct MlpParams {
  Matrix w1;  // hidden x inputs
  Matrix b1;  // hidden x 1
  Matrix w2;  // 1 x hidden
  Matrix b2;  // 1 x 1
};

struct MlpTask {
  Matrix x;  // samples x inputs
  Vector y;
  MlpParams init;
};

/// Data, targets and the shared initial weights are all drawn from `seed`.
MlpTask make_mlp_task(const MlpOptions& opts, std::uint64_t seed);

double mlp_loss(const MlpTask& task, const MlpParams& p);
/// Loss and gradients in one pass.
double mlp_loss_and_grad(const MlpTask& task, const MlpParams& p, MlpParams& grad);

struct MlpRun {
  std::vector<double> loss;  // loss[t] after t updates, t = 0..steps
  bool diverged = false;     // loss exceeded 1e6 or went non-finite; run stopped

  double final_loss() const { return loss.back(); }
};

inline constexpr double kDivergenceLoss = 1e6;

MlpRun run_mlp(const MlpTask& task, Method method, const SubTrackConfig& cfg,
               const MlpOptions& opts);

/// Desk-tuned defaults for the MLP task (shared by the comparison and the
/// ablation).
SubTrackConfig mlp_default_config();

/// One named optimizer setting in a comparison.
struct MlpVariant {
  std::string name;
  Method method;
  SubTrackConfig cfg;
};

/// subtrack, galore_like, full_adam with the shared config.
std::vector<MlpVariant> mlp_comparison_variants(const SubTrackConfig& base);

/// tracking_only, tracking_pao, tracking_recovery, subtrack_full, full_adam.
std::vector<MlpVariant> ablation_variants(const SubTrackConfig& base);

struct SeedRun {
  std::string variant;
  std::uint64_t seed = 0;
  MlpRun run;
};

/// Runs every variant on seeds first_seed .. first_seed+num_seeds-1.
/// `jobs` > 1 spreads the independent runs over threads; the result order
/// (variant-major, then seed) does not depend on it.
std::vector<SeedRun> run_mlp_grid(const std::vector<MlpVariant>& variants,
                                  const MlpOptions& opts, std::uint64_t first_seed,
                                  std::size_t num_seeds, std::size_t jobs = 1);

/// Median final loss of one variant across seeds.
double median_final_loss(const std::vector<SeedRun>& runs, const std::string& variant);

/// Long format: <first_column>,seed,step,loss
void write_mlp_csv(std::ostream& out, const std::vector<SeedRun>& runs,
                   const std::string& first_column);

}  // namespace subtrack::bench
