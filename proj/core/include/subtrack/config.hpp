#pragma once

#include "subtrack/linalg.hpp"
#include "subtrack/moments.hpp"

#include <cstddef>
#include <limits>
#include <optional>
#include <string_view>

namespace subtrack {

enum class Method { subtrack, galore_like, full_adam };

inline constexpr std::size_t kNeverUpdate = std::numeric_limits<std::size_t>::max();

/// Hyperparameters shared by all three optimizers. Defaults follow the
/// published pre-training setup where one exists (scale 0.25, step size
/// 1e4, interval 200); desk-scale experiments override most of them.
struct SubTrackConfig {
  double alpha = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;  // added inside the square root
  double eta = 1e4;
  Index rank = 4;
  std::size_t update_interval = 200;
  double zeta = 1.01;
  double scale = 0.25;  // multiplies the projected-back update only
  VarianceMode variance_mode = VarianceMode::abs;
  bool recovery_enabled = true;
  bool pao_enabled = true;
  Index min_matrix_dim = 2;  // min(m, n) below this falls back to full Adam

  double eps_phi = 1e-12;
  bool bias_correction = false;  // full-Adam baseline only
  double tangent_tol = linalg::kDefaultTripletTol;
  int tangent_max_iter = linalg::kDefaultTripletMaxIter;

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;
};

std::string_view to_string(VarianceMode mode);
std::string_view to_string(Method method);
std::optional<VarianceMode> parse_variance_mode(std::string_view text);
std::optional<Method> parse_method(std::string_view text);

}  // namespace subtrack
