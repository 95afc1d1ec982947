#include "oracles.hpp"

#include "subtrack/checkpoint.hpp"
#include "subtrack/optimizer.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

using namespace subtrack;
using oracle::Gen;

namespace {

SubTrackConfig small_config() {
  SubTrackConfig cfg;
  cfg.rank = 3;
  cfg.update_interval = 4;
  cfg.eta = 0.1;
  cfg.alpha = 1e-2;
  return cfg;
}

struct Model {
  Matrix wide, tall, bias;
};

void train(Optimizer& opt, Model& model, Gen& gen, int steps) {
  for (int t = 0; t < steps; ++t) {
    opt.step("wide", model.wide, gen.matrix(5, 11));
    opt.step("tall", model.tall, gen.matrix(9, 6));
    opt.step("bias", model.bias, gen.matrix(1, 7));
  }
}

}  // namespace

TEST(Checkpoint, RoundTripContinuesBitIdentically) {
  Gen init(40);
  Model a{init.matrix(5, 11), init.matrix(9, 6), init.matrix(1, 7)};
  Optimizer opt(Method::subtrack, small_config());
  Gen grads(41);
  train(opt, a, grads, 7);

  std::stringstream buf;
  write_checkpoint(buf, opt.checkpoint());
  Optimizer resumed(Method::subtrack, small_config());
  resumed.restore(read_checkpoint(buf));
  Model b = a;

  Gen grads_a = grads, grads_b = grads;
  train(opt, a, grads_a, 9);
  train(resumed, b, grads_b, 9);
  EXPECT_EQ(a.wide, b.wide);
  EXPECT_EQ(a.tall, b.tall);
  EXPECT_EQ(a.bias, b.bias);
}

TEST(Checkpoint, FileRoundTripPreservesEveryField) {
  Gen init(42);
  Model m{init.matrix(5, 11), init.matrix(9, 6), init.matrix(1, 7)};
  Optimizer opt(Method::subtrack, small_config());
  Gen grads(43);
  train(opt, m, grads, 5);
  const auto path = std::filesystem::temp_directory_path() / "subtrack_ckpt_test.bin";
  save_checkpoint(path.string(), opt.checkpoint());
  const Checkpoint back = load_checkpoint(path.string());
  std::filesystem::remove(path);

  const Checkpoint orig = opt.checkpoint();
  ASSERT_EQ(back.lowrank.size(), orig.lowrank.size());
  for (const auto& [name, st] : orig.lowrank) {
    const ParamState& other = back.lowrank.at(name);
    EXPECT_EQ(other.name, name);
    EXPECT_EQ(other.subspace.basis, st.subspace.basis);
    EXPECT_EQ(other.subspace.transposed, st.subspace.transposed);
    EXPECT_EQ(other.subspace.last_update_step, st.subspace.last_update_step);
    EXPECT_EQ(other.moments.first, st.moments.first);
    EXPECT_EQ(other.moments.second, st.moments.second);
    EXPECT_EQ(other.moments.steps, st.moments.steps);
    EXPECT_EQ(other.recovery.prev_lambda_norm, st.recovery.prev_lambda_norm);
    EXPECT_EQ(other.step, st.step);
  }
  ASSERT_EQ(back.adam.size(), 1u);
  EXPECT_EQ(back.adam.at("bias").first, orig.adam.at("bias").first);
  EXPECT_EQ(back.adam.at("bias").second, orig.adam.at("bias").second);
  EXPECT_EQ(back.adam.at("bias").steps, orig.adam.at("bias").steps);
}

TEST(Checkpoint, InspectCountsMatrixElements) {
  Gen gen(44);
  const Index m = 6, n = 10, r = 3;
  auto cfg = small_config();
  cfg.rank = r;
  Optimizer opt(Method::subtrack, cfg);
  Matrix W = gen.matrix(m, n), T = gen.matrix(n, m);
  opt.step("w", W, gen.matrix(m, n));
  opt.step("t", T, gen.matrix(n, m));
  std::stringstream buf;
  write_checkpoint(buf, opt.checkpoint());
  const auto blocks = inspect_checkpoint(buf);
  ASSERT_EQ(blocks.size(), 2u);
  for (const auto& b : blocks) {
    EXPECT_TRUE(b.lowrank);
    EXPECT_EQ(b.rows, static_cast<std::uint64_t>(m));
    EXPECT_EQ(b.cols, static_cast<std::uint64_t>(n));
    EXPECT_EQ(b.rank, static_cast<std::uint64_t>(r));
    EXPECT_EQ(b.matrix_elements, static_cast<std::uint64_t>(m * r + 2 * n * r));
    EXPECT_EQ(b.scalar_fields, 9u);
  }
}

TEST(Checkpoint, RejectsCorruptInput) {
  Gen gen(45);
  Optimizer opt(Method::subtrack, small_config());
  Matrix W = gen.matrix(5, 11);
  opt.step("w", W, gen.matrix(5, 11));
  std::stringstream buf;
  write_checkpoint(buf, opt.checkpoint());
  const std::string good = buf.str();

  auto rejects = [](const std::string& bytes) {
    std::stringstream in(bytes);
    EXPECT_THROW(read_checkpoint(in), std::runtime_error);
  };
  rejects("");
  rejects("NOTSUBTR" + good.substr(8));
  rejects(good.substr(0, good.size() - 3));  // truncated
  std::string bad_version = good;
  bad_version[8] = 7;
  rejects(bad_version);
  std::string trailing = good + "x";
  rejects(trailing);

  EXPECT_THROW(load_checkpoint("/nonexistent/dir/ckpt.bin"), std::runtime_error);
}

TEST(Checkpoint, RestoreRequiresMatchingMethod) {
  Optimizer a(Method::subtrack, small_config());
  Optimizer b(Method::galore_like, small_config());
  EXPECT_THROW(b.restore(a.checkpoint()), std::invalid_argument);
}
