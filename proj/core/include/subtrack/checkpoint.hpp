#pragma once

#include "subtrack/config.hpp"
#include "subtrack/engine.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace subtrack {

/// Serialized optimizer state. Layout (all integers and floats little-endian,
/// floats IEEE-754 binary64, matrices column-major):
///
///   header   "SUBTRACK" (8 bytes) | u32 version = 1 | u32 method | u64 count
///   block    u32 name_len | name bytes | u8 kind (0 = low-rank, 1 = adam)
///   low-rank u64 m | u64 n | u64 r | u8 transposed | u64 last_update_step
///            u64 step | u64 moment_steps | u8 has_prev | f64 prev_norm
///            f64[m*r] basis | f64[r*n] M | f64[r*n] V
///   adam     u64 rows | u64 cols | u64 steps | f64[rows*cols] M | f64[rows*cols] V
///
/// Blocks are written in name order: low-rank parameters first, then Adam.
struct Checkpoint {
  Method method = Method::subtrack;
  std::map<std::string, ParamState> lowrank;
  std::map<std::string, AdamState> adam;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt);
Checkpoint read_checkpoint(std::istream& in);

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

/// What one serialized block holds, split into matrix elements and
/// scalar fields.
struct BlockSummary {
  std::string name;
  bool lowrank = false;
  std::uint64_t rows = 0;  // m (oriented) for low-rank blocks
  std::uint64_t cols = 0;  // n (oriented)
  std::uint64_t rank = 0;
  std::uint64_t matrix_elements = 0;
  std::uint64_t scalar_fields = 0;
};

/// Walks a serialized checkpoint without building any state.
std::vector<BlockSummary> inspect_checkpoint(std::istream& in);

}  // namespace subtrack
