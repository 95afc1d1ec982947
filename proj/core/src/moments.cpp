#include "subtrack/moments.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace subtrack::moments {

namespace {

void require_decay(double beta, const char* name) {
  if (!(beta >= 0.0 && beta < 1.0)) {
    throw std::invalid_argument(std::string("moments: ") + name +
                                " must lie in [0, 1)");
  }
}

void require_shape(const LowRankMoments& state, const Matrix& grad,
                   const char* what) {
  if (state.first.rows() != grad.rows() || state.first.cols() != grad.cols() ||
      state.second.rows() != grad.rows() ||
      state.second.cols() != grad.cols()) {
    throw std::invalid_argument(
        std::string(what) + ": moments are " +
        std::to_string(state.first.rows()) + "x" +
        std::to_string(state.first.cols()) + " but gradient is " +
        std::to_string(grad.rows()) + "x" + std::to_string(grad.cols()));
  }
}

}  // namespace

LowRankMoments plain_update(const LowRankMoments& state, const Matrix& grad,
                            double beta1, double beta2) {
  require_decay(beta1, "beta1");
  require_decay(beta2, "beta2");
  require_shape(state, grad, "plain_update");

  LowRankMoments next;
  next.first = beta1 * state.first + (1.0 - beta1) * grad;
  next.second = beta2 * state.second + (1.0 - beta2) * grad.cwiseAbs2();
  next.steps = state.steps + 1;
  return next;
}

LowRankMoments projection_aware_update(const LowRankMoments& state,
                                       const SubspaceBasis& new_basis,
                                       const SubspaceBasis& old_basis,
                                       const Matrix& grad, double beta1,
                                       double beta2, VarianceMode mode) {
  require_decay(beta1, "beta1");
  require_decay(beta2, "beta2");
  require_shape(state, grad, "projection_aware_update");
  if (new_basis.dim() != old_basis.dim() ||
      new_basis.rank() != old_basis.rank() ||
      new_basis.rank() != grad.rows()) {
    throw std::invalid_argument(
        "projection_aware_update: bases and moments disagree on shape");
  }
  const std::size_t t = state.steps + 1;

  const Matrix rotation = new_basis.basis.transpose() * old_basis.basis;
  const Matrix rotated_first = rotation * state.first;
  const Matrix rotation_sq = rotation.cwiseAbs2();
  // Q∘Q·(V − M∘M) + (QM)∘(QM), grouped so that an exact identity rotation
  // returns V bit for bit: the mean correction below is then exactly zero.
  Matrix carried = rotation_sq * state.second +
                   (rotated_first.cwiseAbs2() - rotation_sq * state.first.cwiseAbs2());
  if (mode == VarianceMode::abs) {
    carried = carried.cwiseAbs();
  } else {
    carried = carried.cwiseMax(0.0);
  }
  const double history =
      1.0 - std::pow(beta2, static_cast<double>(t - 1));

  LowRankMoments next;
  next.first = beta1 * rotated_first + (1.0 - beta1) * grad;
  next.second = (beta2 * history) * carried + (1.0 - beta2) * grad.cwiseAbs2();
  next.steps = t;
  return next;
}

Matrix regularized_direction(const LowRankMoments& state, double eps) {
  if (!(eps > 0.0)) {
    throw std::invalid_argument("regularized_direction: eps must be > 0");
  }
  return state.first.cwiseQuotient((state.second.array() + eps).sqrt().matrix());
}

}  // namespace subtrack::moments
