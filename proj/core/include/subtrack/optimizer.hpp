#pragma once

#include "subtrack/checkpoint.hpp"
#include "subtrack/config.hpp"
#include "subtrack/engine.hpp"

#include <cstddef>
#include <map>
#include <string>

namespace subtrack {

/// Receives one record per parameter per step.
class StepLogSink {
 public:
  virtual ~StepLogSink() = default;
  virtual void record(const StepRecord& rec) = 0;
};

/// Multi-parameter driver. Parameters are identified by name; state is
/// created lazily on the first step of each name. Matrices with
/// min(rows, cols) < cfg.min_matrix_dim always use full Adam.
///
/// Distinct parameters share no mutable state, so callers may step them
/// from different threads provided each name is only used by one thread
/// and no parameter is being added concurrently.
class Optimizer {
 public:
  Optimizer(Method method, SubTrackConfig cfg, StepLogSink* sink = nullptr);

  StepRecord step(const std::string& name, Matrix& W, const Matrix& G);

  /// Per-step α, e.g. from a warmup schedule.
  void set_learning_rate(double alpha);
  double learning_rate() const { return cfg_.alpha; }

  Method method() const { return method_; }
  const SubTrackConfig& config() const { return cfg_; }

  /// Number of matrix elements held for `name` (0 if unknown).
  std::size_t state_element_count(const std::string& name) const;

  const ParamState* lowrank_state(const std::string& name) const;
  const AdamState* adam_state(const std::string& name) const;

  Checkpoint checkpoint() const;
  /// Replaces all state. The checkpoint's method must match.
  void restore(Checkpoint ckpt);

 private:
  bool uses_adam(const Matrix& G) const;

  Method method_;
  SubTrackConfig cfg_;
  StepLogSink* sink_;
  std::map<std::string, ParamState> lowrank_;
  std::map<std::string, AdamState> adam_;
};

}  // namespace subtrack
