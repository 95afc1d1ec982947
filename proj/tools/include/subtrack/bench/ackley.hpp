#pragma once

#include "subtrack/config.hpp"
#include "subtrack/linalg.hpp"
#include "subtrack/optimizer.hpp"

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace subtrack::bench {

/// f(x) = −20 exp(−0.2 √(mean xᵢ²)) − exp(mean cos 2πxᵢ) + 20 + e
double ackley(const Vector& x);

/// Analytic gradient. At x = 0 the norm term is not differentiable; the
/// gradient is defined as 0 there.
Vector ackley_grad(const Vector& x);

/// The parameter is a rows x cols matrix; Ackley sees it flattened
/// column-major, so x = (W00, W10, W01, W11) for the default 2 x 2.
struct AckleyOptions {
  Index rows = 2;
  Index cols = 2;
  Vector start = Vector::Constant(4, 3.0);
  std::size_t steps = 100;
  std::size_t warmup_steps = 0;  // linear warmup of the learning rate; 0 = off
};

/// Ackley-tuned defaults: rank 1, interval 10, learning rate and step size
/// chosen for the 100-step budget.
SubTrackConfig ackley_default_config();

struct AckleyRow {
  std::size_t step = 0;  // 1-based: state after the step-th update
  Vector x;
  double f = 0.0;
  bool subspace_updated = false;
  double jump = 0.0;  // ‖x_t − x_{t−1}‖
};

struct AckleyTrace {
  Vector start;
  double start_f = 0.0;
  std::vector<AckleyRow> rows;

  double final_f() const { return rows.empty() ? start_f : rows.back().f; }
  double max_jump() const;
};

AckleyTrace run_ackley(Method method, const SubTrackConfig& cfg,
                       const AckleyOptions& opts = {}, StepLogSink* sink = nullptr);

/// step,x0..x{d-1},f,update_flag,jump
void write_ackley_csv(std::ostream& out, const AckleyTrace& trace);

}  // namespace subtrack::bench
