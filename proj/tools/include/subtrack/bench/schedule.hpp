#pragma once

#include <cstddef>

namespace subtrack::bench {

/// Linear warmup: base·(step+1)/warmup for step < warmup, base afterwards.
/// `step` is 0-based; warmup = 0 disables the ramp.
inline double warmup_lr(double base, std::size_t step, std::size_t warmup) {
  if (warmup == 0 || step >= warmup) return base;
  return base * static_cast<double>(step + 1) / static_cast<double>(warmup);
}

}  // namespace subtrack::bench
