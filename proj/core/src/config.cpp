#include "subtrack/config.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace subtrack {

namespace {

void check(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(std::string("config: ") + message);
}

}  // namespace

void SubTrackConfig::validate() const {
  check(std::isfinite(alpha) && alpha > 0.0, "alpha must be > 0");
  check(beta1 >= 0.0 && beta1 < 1.0, "beta1 must lie in [0, 1)");
  check(beta2 >= 0.0 && beta2 < 1.0, "beta2 must lie in [0, 1)");
  check(std::isfinite(eps) && eps > 0.0, "eps must be > 0");
  check(std::isfinite(eta) && eta >= 0.0, "eta must be >= 0");
  check(rank >= 1, "rank must be >= 1");
  check(update_interval >= 1, "update_interval must be >= 1");
  check(std::isfinite(zeta) && zeta > 0.0, "zeta must be > 0");
  check(std::isfinite(scale) && scale > 0.0, "scale must be > 0");
  check(min_matrix_dim >= 1, "min_matrix_dim must be >= 1");
  check(std::isfinite(eps_phi) && eps_phi > 0.0, "eps_phi must be > 0");
  check(tangent_tol > 0.0, "tangent_tol must be > 0");
  check(tangent_max_iter >= 1, "tangent_max_iter must be >= 1");
}

std::string_view to_string(VarianceMode mode) {
  return mode == VarianceMode::abs ? "abs" : "clip";
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::subtrack: return "subtrack";
    case Method::galore_like: return "galore_like";
    case Method::full_adam: return "full_adam";
  }
  return "unknown";
}

std::optional<VarianceMode> parse_variance_mode(std::string_view text) {
  if (text == "abs") return VarianceMode::abs;
  if (text == "clip") return VarianceMode::clip;
  return std::nullopt;
}

std::optional<Method> parse_method(std::string_view text) {
  if (text == "subtrack") return Method::subtrack;
  if (text == "galore_like") return Method::galore_like;
  if (text == "full_adam") return Method::full_adam;
  return std::nullopt;
}

}  // namespace subtrack
