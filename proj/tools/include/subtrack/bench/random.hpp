#pragma once

#include "subtrack/linalg.hpp"

#include <cstdint>
#include <random>

namespace subtrack::bench {

using Rng = std::mt19937_64;

/// i.i.d. N(0, stddev²) entries, filled column by column.
Matrix gaussian_matrix(Rng& rng, Index rows, Index cols, double stddev = 1.0);

/// Orthonormal m x r (sign-fixed QR of a Gaussian matrix).
Matrix random_orthonormal(Rng& rng, Index m, Index r);

/// Q diag(λ) Qᵀ with λ uniform in [lo, hi].
Matrix random_spd(Rng& rng, Index n, double lo, double hi);

}  // namespace subtrack::bench
