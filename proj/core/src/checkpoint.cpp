#include "subtrack/checkpoint.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace subtrack {

namespace {

constexpr std::array<char, 8> kMagic = {'S', 'U', 'B', 'T', 'R', 'A', 'C', 'K'};
constexpr std::uint8_t kLowRank = 0;
constexpr std::uint8_t kAdam = 1;
// Sanity bound on any single dimension read back from disk.
constexpr std::uint64_t kMaxDim = std::uint64_t{1} << 32;

[[noreturn]] void corrupt(const std::string& what) {
  throw std::runtime_error("checkpoint: " + what);
}

template <typename T>
void put(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get(std::istream& in) {
  std::array<char, sizeof(T)> bytes;
  if (!in.read(bytes.data(), bytes.size())) corrupt("truncated stream");
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

void put_matrix(std::ostream& out, const Matrix& M) {
  for (Index j = 0; j < M.cols(); ++j) {
    for (Index i = 0; i < M.rows(); ++i) put<double>(out, M(i, j));
  }
}

Matrix get_matrix(std::istream& in, std::uint64_t rows, std::uint64_t cols) {
  Matrix M(static_cast<Index>(rows), static_cast<Index>(cols));
  for (Index j = 0; j < M.cols(); ++j) {
    for (Index i = 0; i < M.rows(); ++i) M(i, j) = get<double>(in);
  }
  return M;
}

void skip_doubles(std::istream& in, std::uint64_t count) {
  in.ignore(static_cast<std::streamsize>(count * sizeof(double)));
  if (static_cast<std::uint64_t>(in.gcount()) != count * sizeof(double)) {
    corrupt("truncated stream");
  }
}

std::uint64_t get_dim(std::istream& in, const char* what) {
  const auto v = get<std::uint64_t>(in);
  if (v > kMaxDim) corrupt(std::string("implausible ") + what);
  return v;
}

void put_name(std::ostream& out, const std::string& name, std::uint8_t kind) {
  if (name.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("checkpoint: parameter name too long");
  }
  put<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
  out.write(name.data(), static_cast<std::streamsize>(name.size()));
  put<std::uint8_t>(out, kind);
}

std::string get_name(std::istream& in) {
  const auto len = get<std::uint32_t>(in);
  if (len > (1u << 20)) corrupt("implausible name length");
  std::string name(len, '\0');
  if (len > 0 && !in.read(name.data(), len)) corrupt("truncated name");
  return name;
}

std::uint64_t read_header(std::istream& in, Method* method) {
  std::array<char, 8> magic;
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    corrupt("bad magic");
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    corrupt("unsupported version " + std::to_string(version));
  }
  const auto m = get<std::uint32_t>(in);
  if (m > static_cast<std::uint32_t>(Method::full_adam)) corrupt("unknown method");
  if (method) *method = static_cast<Method>(m);
  return get<std::uint64_t>(in);
}

// Fields after the name/kind prefix that are not matrix elements.
constexpr std::uint64_t kLowRankScalars = 9;
constexpr std::uint64_t kAdamScalars = 3;

}  // namespace

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt) {
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.method));
  put<std::uint64_t>(out, ckpt.lowrank.size() + ckpt.adam.size());

  for (const auto& [name, st] : ckpt.lowrank) {
    const Matrix& B = st.subspace.basis;
    const Matrix& M = st.moments.first;
    const Matrix& V = st.moments.second;
    if (M.rows() != B.cols() || V.rows() != M.rows() || V.cols() != M.cols()) {
      throw std::invalid_argument("checkpoint: inconsistent state for '" + name + "'");
    }
    put_name(out, name, kLowRank);
    put<std::uint64_t>(out, static_cast<std::uint64_t>(B.rows()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(M.cols()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(B.cols()));
    put<std::uint8_t>(out, st.subspace.transposed ? 1 : 0);
    put<std::uint64_t>(out, st.subspace.last_update_step);
    put<std::uint64_t>(out, st.step);
    put<std::uint64_t>(out, st.moments.steps);
    put<std::uint8_t>(out, st.recovery.prev_lambda_norm ? 1 : 0);
    put<double>(out, st.recovery.prev_lambda_norm.value_or(0.0));
    put_matrix(out, B);
    put_matrix(out, M);
    put_matrix(out, V);
  }
  for (const auto& [name, st] : ckpt.adam) {
    if (st.first.rows() != st.second.rows() || st.first.cols() != st.second.cols()) {
      throw std::invalid_argument("checkpoint: inconsistent state for '" + name + "'");
    }
    put_name(out, name, kAdam);
    put<std::uint64_t>(out, static_cast<std::uint64_t>(st.first.rows()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(st.first.cols()));
    put<std::uint64_t>(out, st.steps);
    put_matrix(out, st.first);
    put_matrix(out, st.second);
  }
  if (!out) throw std::runtime_error("checkpoint: write failed");
}

Checkpoint read_checkpoint(std::istream& in) {
  Checkpoint ckpt;
  const std::uint64_t count = read_header(in, &ckpt.method);
  for (std::uint64_t b = 0; b < count; ++b) {
    std::string name = get_name(in);
    const auto kind = get<std::uint8_t>(in);
    if (kind == kLowRank) {
      ParamState st;
      st.name = name;
      const auto m = get_dim(in, "rows");
      const auto n = get_dim(in, "cols");
      const auto r = get_dim(in, "rank");
      if (r == 0 || r > m || m > n) corrupt("bad low-rank shape for '" + name + "'");
      st.subspace.transposed = get<std::uint8_t>(in) != 0;
      st.subspace.last_update_step = get<std::uint64_t>(in);
      st.step = get<std::uint64_t>(in);
      st.moments.steps = get<std::uint64_t>(in);
      const bool has_prev = get<std::uint8_t>(in) != 0;
      const double prev = get<double>(in);
      if (has_prev) st.recovery.prev_lambda_norm = prev;
      st.subspace.basis = get_matrix(in, m, r);
      st.moments.first = get_matrix(in, r, n);
      st.moments.second = get_matrix(in, r, n);
      if (!ckpt.lowrank.emplace(name, std::move(st)).second) {
        corrupt("duplicate parameter '" + name + "'");
      }
    } else if (kind == kAdam) {
      AdamState st;
      st.name = name;
      const auto rows = get_dim(in, "rows");
      const auto cols = get_dim(in, "cols");
      st.steps = get<std::uint64_t>(in);
      st.first = get_matrix(in, rows, cols);
      st.second = get_matrix(in, rows, cols);
      if (!ckpt.adam.emplace(name, std::move(st)).second) {
        corrupt("duplicate parameter '" + name + "'");
      }
    } else {
      corrupt("unknown block kind");
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) corrupt("trailing bytes after last block");
  return ckpt;
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("checkpoint: cannot open '" + path + "' for writing");
  write_checkpoint(out, ckpt);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open '" + path + "'");
  return read_checkpoint(in);
}

std::vector<BlockSummary> inspect_checkpoint(std::istream& in) {
  const std::uint64_t count = read_header(in, nullptr);
  std::vector<BlockSummary> out;
  for (std::uint64_t b = 0; b < count; ++b) {
    BlockSummary s;
    s.name = get_name(in);
    const auto kind = get<std::uint8_t>(in);
    if (kind == kLowRank) {
      s.lowrank = true;
      s.rows = get_dim(in, "rows");
      s.cols = get_dim(in, "cols");
      s.rank = get_dim(in, "rank");
      get<std::uint8_t>(in);
      for (int i = 0; i < 3; ++i) get<std::uint64_t>(in);
      get<std::uint8_t>(in);
      get<double>(in);
      s.matrix_elements = s.rows * s.rank + 2 * s.rank * s.cols;
      s.scalar_fields = kLowRankScalars;
    } else if (kind == kAdam) {
      s.rows = get_dim(in, "rows");
      s.cols = get_dim(in, "cols");
      get<std::uint64_t>(in);
      s.matrix_elements = 2 * s.rows * s.cols;
      s.scalar_fields = kAdamScalars;
    } else {
      corrupt("unknown block kind");
    }
    skip_doubles(in, s.matrix_elements);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace subtrack
