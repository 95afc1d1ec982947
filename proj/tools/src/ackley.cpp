#include "subtrack/bench/ackley.hpp"

#include "subtrack/bench/csv.hpp"
#include "subtrack/bench/schedule.hpp"
#include "subtrack/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace subtrack::bench {

double ackley(const Vector& x) {
  if (x.size() == 0) throw std::invalid_argument("ackley: empty input");
  const double d = static_cast<double>(x.size());
  const double r = std::sqrt(x.squaredNorm() / d);
  const double c = (2.0 * std::numbers::pi * x.array()).cos().sum() / d;
  return -20.0 * std::exp(-0.2 * r) - std::exp(c) + 20.0 + std::numbers::e;
}

Vector ackley_grad(const Vector& x) {
  if (x.size() == 0) throw std::invalid_argument("ackley_grad: empty input");
  const double d = static_cast<double>(x.size());
  const double two_pi = 2.0 * std::numbers::pi;
  const double r = std::sqrt(x.squaredNorm() / d);
  const double c = (two_pi * x.array()).cos().sum() / d;
  Vector g = (two_pi / d) * std::exp(c) * (two_pi * x.array()).sin().matrix();
  if (r > 0.0) g += (4.0 * std::exp(-0.2 * r) / (d * r)) * x;
  return g;
}

SubTrackConfig ackley_default_config() {
  SubTrackConfig cfg;
  cfg.rank = 1;
  cfg.update_interval = 10;
  cfg.alpha = 0.1;
  cfg.eta = 1.0;
  cfg.scale = 1.0;
  return cfg;
}

double AckleyTrace::max_jump() const {
  double m = 0.0;
  for (const auto& row : rows) m = std::max(m, row.jump);
  return m;
}

AckleyTrace run_ackley(Method method, const SubTrackConfig& cfg,
                       const AckleyOptions& opts, StepLogSink* sink) {
  if (opts.rows < 1 || opts.cols < 1 || opts.start.size() != opts.rows * opts.cols) {
    throw std::invalid_argument("ackley: start point has " +
                                std::to_string(opts.start.size()) + " entries, shape is " +
                                std::to_string(opts.rows) + "x" + std::to_string(opts.cols));
  }
  Optimizer opt(method, cfg, sink);
  Matrix W = Eigen::Map<const Matrix>(opts.start.data(), opts.rows, opts.cols);

  AckleyTrace trace;
  trace.start = opts.start;
  trace.start_f = ackley(opts.start);
  trace.rows.reserve(opts.steps);

  Vector x = opts.start;
  for (std::size_t t = 0; t < opts.steps; ++t) {
    opt.set_learning_rate(warmup_lr(cfg.alpha, t, opts.warmup_steps));
    const Vector g = ackley_grad(x);
    const Matrix G = Eigen::Map<const Matrix>(g.data(), opts.rows, opts.cols);
    const StepRecord rec = opt.step("x", W, G);
    const Vector next = Eigen::Map<const Vector>(W.data(), W.size());
    AckleyRow row;
    row.step = t + 1;
    row.x = next;
    row.f = ackley(next);
    row.subspace_updated = rec.subspace_updated;
    row.jump = (next - x).norm();
    trace.rows.push_back(std::move(row));
    x = next;
  }
  return trace;
}

void write_ackley_csv(std::ostream& out, const AckleyTrace& trace) {
  std::vector<std::string> header{"step"};
  for (Index i = 0; i < trace.start.size(); ++i) header.push_back("x" + std::to_string(i));
  header.insert(header.end(), {"f", "update_flag", "jump"});
  CsvWriter csv(out, std::move(header));
  for (const auto& r : trace.rows) {
    auto row = csv.row();
    row << r.step;
    for (Index i = 0; i < r.x.size(); ++i) row << r.x(i);
    row << r.f << r.subspace_updated << r.jump;
  }
}

}  // namespace subtrack::bench
