#include "subtrack/bench/mlp.hpp"

#include "subtrack/bench/csv.hpp"
#include "subtrack/bench/random.hpp"
#include "subtrack/bench/schedule.hpp"
#include "subtrack/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

namespace subtrack::bench {

MlpTask make_mlp_task(const MlpOptions& opts, std::uint64_t seed) {
  if (opts.inputs < 1 || opts.hidden < 1 || opts.teacher_hidden < 1 || opts.samples < 1) {
    throw std::invalid_argument("mlp: all sizes must be >= 1");
  }
  Rng rng(seed);
  MlpTask task;
  task.x = gaussian_matrix(rng, opts.samples, opts.inputs);

  const double in_scale = 1.0 / std::sqrt(static_cast<double>(opts.inputs));
  const Matrix t1 = gaussian_matrix(rng, opts.teacher_hidden, opts.inputs, 2.0 * in_scale);
  const Matrix t2 = gaussian_matrix(rng, 1, opts.teacher_hidden, 1.0);
  const Matrix noise = gaussian_matrix(rng, opts.samples, 1, opts.noise);
  task.y = ((task.x * t1.transpose()).array().tanh().matrix() * t2.transpose() + noise).col(0);

  const double hid_scale = 1.0 / std::sqrt(static_cast<double>(opts.hidden));
  task.init.w1 = gaussian_matrix(rng, opts.hidden, opts.inputs, in_scale);
  task.init.b1 = Matrix::Zero(opts.hidden, 1);
  task.init.w2 = gaussian_matrix(rng, 1, opts.hidden, hid_scale);
  task.init.b2 = Matrix::Zero(1, 1);
  return task;
}

namespace {

Matrix hidden_activations(const MlpTask& task, const MlpParams& p) {
  Matrix pre = task.x * p.w1.transpose();
  pre.rowwise() += p.b1.col(0).transpose();
  return pre.array().tanh().matrix();
}

}  // namespace

double mlp_loss(const MlpTask& task, const MlpParams& p) {
  const Matrix h = hidden_activations(task, p);
  const Vector err = (h * p.w2.transpose()).col(0).array() + p.b2(0, 0) - task.y.array();
  return err.squaredNorm() / static_cast<double>(task.y.size());
}

double mlp_loss_and_grad(const MlpTask& task, const MlpParams& p, MlpParams& grad) {
  const double n = static_cast<double>(task.y.size());
  const Matrix h = hidden_activations(task, p);
  const Vector err = (h * p.w2.transpose()).col(0).array() + p.b2(0, 0) - task.y.array();
  const Vector d = (2.0 / n) * err;

  grad.w2 = d.transpose() * h;
  grad.b2 = Matrix::Constant(1, 1, d.sum());
  const Matrix dh = (d * p.w2).cwiseProduct((1.0 - h.array().square()).matrix());
  grad.w1 = dh.transpose() * task.x;
  grad.b1 = dh.colwise().sum().transpose();
  return err.squaredNorm() / n;
}

MlpRun run_mlp(const MlpTask& task, Method method, const SubTrackConfig& cfg,
               const MlpOptions& opts) {
  Optimizer opt(method, cfg);
  MlpParams p = task.init;
  MlpParams g;
  MlpRun run;
  run.loss.reserve(opts.steps + 1);
  for (std::size_t t = 0;; ++t) {
    const double loss = mlp_loss_and_grad(task, p, g);
    run.loss.push_back(loss);
    if (!std::isfinite(loss) || loss > kDivergenceLoss) {
      run.diverged = true;
      break;
    }
    if (t == opts.steps) break;
    opt.set_learning_rate(warmup_lr(cfg.alpha, t, opts.warmup_steps));
    opt.step("w1", p.w1, g.w1);
    opt.step("b1", p.b1, g.b1);
    opt.step("w2", p.w2, g.w2);
    opt.step("b2", p.b2, g.b2);
  }
  return run;
}

SubTrackConfig mlp_default_config() {
  SubTrackConfig cfg;
  cfg.alpha = 3e-3;
  cfg.rank = 4;
  cfg.update_interval = 50;
  cfg.eta = 1.0;
  cfg.scale = 1.0;
  return cfg;
}

std::vector<MlpVariant> mlp_comparison_variants(const SubTrackConfig& base) {
  return {{"subtrack", Method::subtrack, base},
          {"galore_like", Method::galore_like, base},
          {"full_adam", Method::full_adam, base}};
}

std::vector<MlpVariant> ablation_variants(const SubTrackConfig& base) {
  auto with = [&](bool pao, bool recovery) {
    SubTrackConfig c = base;
    c.pao_enabled = pao;
    c.recovery_enabled = recovery;
    return c;
  };
  return {{"tracking_only", Method::subtrack, with(false, false)},
          {"tracking_pao", Method::subtrack, with(true, false)},
          {"tracking_recovery", Method::subtrack, with(false, true)},
          {"subtrack_full", Method::subtrack, with(true, true)},
          {"full_adam", Method::full_adam, base}};
}

std::vector<SeedRun> run_mlp_grid(const std::vector<MlpVariant>& variants,
                                  const MlpOptions& opts, std::uint64_t first_seed,
                                  std::size_t num_seeds, std::size_t jobs) {
  std::vector<MlpTask> tasks;
  tasks.reserve(num_seeds);
  for (std::size_t s = 0; s < num_seeds; ++s) tasks.push_back(make_mlp_task(opts, first_seed + s));

  std::vector<SeedRun> out(variants.size() * num_seeds);
  auto work = [&](std::size_t i) {
    const MlpVariant& v = variants[i / num_seeds];
    const std::size_t s = i % num_seeds;
    out[i] = SeedRun{v.name, first_seed + s, run_mlp(tasks[s], v.method, v.cfg, opts)};
  };

  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(out.size(), 1));
  if (jobs == 1) {
    for (std::size_t i = 0; i < out.size(); ++i) work(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> pool;
  for (std::size_t j = 0; j < jobs; ++j) {
    pool.emplace_back([&, j] {
      try {
        for (std::size_t i; (i = next.fetch_add(1)) < out.size();) work(i);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

double median_final_loss(const std::vector<SeedRun>& runs, const std::string& variant) {
  std::vector<double> v;
  for (const auto& r : runs) {
    if (r.variant == variant) v.push_back(r.run.final_loss());
  }
  if (v.empty()) throw std::invalid_argument("median_final_loss: no runs for " + variant);
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

void write_mlp_csv(std::ostream& out, const std::vector<SeedRun>& runs,
                   const std::string& first_column) {
  CsvWriter csv(out, {first_column, "seed", "step", "loss"});
  for (const auto& r : runs) {
    for (std::size_t t = 0; t < r.run.loss.size(); ++t) {
      csv.row() << r.variant << static_cast<unsigned long long>(r.seed) << t << r.run.loss[t];
    }
  }
}

}  // namespace subtrack::bench
