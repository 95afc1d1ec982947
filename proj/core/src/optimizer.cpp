#include "subtrack/optimizer.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace subtrack {

Optimizer::Optimizer(Method method, SubTrackConfig cfg, StepLogSink* sink)
    : method_(method), cfg_(std::move(cfg)), sink_(sink) {
  cfg_.validate();
}

bool Optimizer::uses_adam(const Matrix& G) const {
  return method_ == Method::full_adam ||
         std::min(G.rows(), G.cols()) < cfg_.min_matrix_dim;
}

StepRecord Optimizer::step(const std::string& name, Matrix& W, const Matrix& G) {
  StepRecord rec;
  if (uses_adam(G)) {
    auto it = adam_.find(name);
    if (it == adam_.end()) {
      if (lowrank_.count(name)) {
        throw std::invalid_argument("param '" + name + "': shape changed between steps");
      }
      it = adam_.emplace(name, init_adam_state(G.rows(), G.cols(), name)).first;
    }
    rec = full_adam_step(W, G, it->second, cfg_);
  } else {
    auto it = lowrank_.find(name);
    if (it == lowrank_.end()) {
      if (adam_.count(name)) {
        throw std::invalid_argument("param '" + name + "': shape changed between steps");
      }
      it = lowrank_.emplace(name, ParamState{}).first;
      it->second.name = name;
    }
    rec = method_ == Method::subtrack ? subtrack_step(W, G, it->second, cfg_)
                                      : galore_like_step(W, G, it->second, cfg_);
  }
  if (sink_) sink_->record(rec);
  return rec;
}

void Optimizer::set_learning_rate(double alpha) {
  SubTrackConfig next = cfg_;
  next.alpha = alpha;
  next.validate();
  cfg_ = next;
}

std::size_t Optimizer::state_element_count(const std::string& name) const {
  if (auto it = lowrank_.find(name); it != lowrank_.end()) {
    const ParamState& st = it->second;
    return static_cast<std::size_t>(st.subspace.basis.size() + st.moments.first.size() +
                                    st.moments.second.size());
  }
  if (auto it = adam_.find(name); it != adam_.end()) {
    return static_cast<std::size_t>(it->second.first.size() + it->second.second.size());
  }
  return 0;
}

const ParamState* Optimizer::lowrank_state(const std::string& name) const {
  auto it = lowrank_.find(name);
  return it == lowrank_.end() ? nullptr : &it->second;
}

const AdamState* Optimizer::adam_state(const std::string& name) const {
  auto it = adam_.find(name);
  return it == adam_.end() ? nullptr : &it->second;
}

Checkpoint Optimizer::checkpoint() const {
  return Checkpoint{method_, lowrank_, adam_};
}

void Optimizer::restore(Checkpoint ckpt) {
  if (ckpt.method != method_) {
    throw std::invalid_argument("checkpoint method '" + std::string(to_string(ckpt.method)) +
                                "' does not match optimizer '" +
                                std::string(to_string(method_)) + "'");
  }
  for (auto& [name, st] : ckpt.lowrank) st.name = name;
  for (auto& [name, st] : ckpt.adam) st.name = name;
  lowrank_ = std::move(ckpt.lowrank);
  adam_ = std::move(ckpt.adam);
}

}  // namespace subtrack
