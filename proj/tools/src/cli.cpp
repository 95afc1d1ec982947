#include "subtrack/bench/cli.hpp"

#include "subtrack/bench/ackley.hpp"
#include "subtrack/bench/complexity.hpp"
#include "subtrack/bench/contraction.hpp"
#include "subtrack/bench/csv.hpp"
#include "subtrack/bench/mlp.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace subtrack::bench {

namespace {

struct Args {
  std::string experiment;
  std::string optimizer = "subtrack";
  std::optional<std::size_t> steps;
  std::uint64_t seed = 0;
  std::string out = "-";
  std::string trace;
  std::size_t seeds = 5;
  std::size_t jobs = 1;
  std::size_t warmup = 0;
  std::size_t reps = 21;
  std::vector<double> start;

  std::optional<double> lr;
  std::optional<Index> rank;
  std::optional<std::size_t> interval;
  std::optional<double> eta;
  std::optional<double> zeta;
  std::optional<double> scale;
  std::optional<std::string> variance_mode;
  bool no_recovery = false;
  bool no_pao = false;
  bool bias_correction = false;
};

// Thrown for problems that are the caller's fault (exit 1).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto log = std::make_shared<spdlog::logger>("subtrack", sink);
  log->set_pattern("[%l] %v");
  log->set_level(spdlog::level::warn);
  if (const char* env = std::getenv("SUBTRACK_LOG"); env && *env) {
    const auto level = spdlog::level::from_str(env);
    if (level == spdlog::level::off && std::string(env) != "off") {
      log->warn("SUBTRACK_LOG='{}' not recognised; using 'warn'", env);
    } else {
      log->set_level(level);
    }
  }
  return log;
}

SubTrackConfig build_config(const Args& a) {
  SubTrackConfig cfg;
  if (a.experiment == "ackley") cfg = ackley_default_config();
  if (a.experiment == "mlp" || a.experiment == "ablation") cfg = mlp_default_config();
  if (a.lr) cfg.alpha = *a.lr;
  if (a.rank) cfg.rank = *a.rank;
  if (a.interval) cfg.update_interval = *a.interval;
  if (a.eta) cfg.eta = *a.eta;
  if (a.zeta) cfg.zeta = *a.zeta;
  if (a.scale) cfg.scale = *a.scale;
  if (a.variance_mode) {
    auto mode = parse_variance_mode(*a.variance_mode);
    if (!mode) throw UsageError("unknown variance mode '" + *a.variance_mode + "'");
    cfg.variance_mode = *mode;
  }
  if (a.no_recovery) cfg.recovery_enabled = false;
  if (a.no_pao) cfg.pao_enabled = false;
  if (a.bias_correction) cfg.bias_correction = true;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

Method single_method(const std::string& name) {
  auto m = parse_method(name);
  if (!m) throw UsageError("optimizer '" + name + "' is not valid here");
  return *m;
}

std::string join(const Vector& v) {
  std::string s;
  for (Index i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_number(v(i));
  return s;
}

// Returns the summary line.
std::string run(const Args& a, const SubTrackConfig& cfg, std::ostream& csv,
                spdlog::logger& log) {
  if (a.experiment == "ackley") {
    const Method method = single_method(a.optimizer);
    AckleyOptions opts;
    if (!a.start.empty()) {
      if (static_cast<Index>(a.start.size()) != opts.rows * opts.cols) {
        throw UsageError(fmt::format("--start needs {} values", opts.rows * opts.cols));
      }
      opts.start = Eigen::Map<const Vector>(a.start.data(), static_cast<Index>(a.start.size()));
    }
    if (a.steps) opts.steps = *a.steps;
    opts.warmup_steps = a.warmup;

    std::ofstream trace_file;
    std::unique_ptr<CsvStepSink> sink;
    if (!a.trace.empty()) {
      trace_file.open(a.trace, std::ios::binary | std::ios::trunc);
      if (!trace_file) throw UsageError("cannot write trace file '" + a.trace + "'");
      sink = std::make_unique<CsvStepSink>(trace_file);
    }
    log.info("ackley: optimizer={} lr={} eta={} scale={} start=({})", a.optimizer, cfg.alpha,
             cfg.eta, cfg.scale, join(opts.start));
    const AckleyTrace tr = run_ackley(method, cfg, opts, sink.get());
    write_ackley_csv(csv, tr);
    return fmt::format("ackley optimizer={} steps={} start=({}) f0={} final_f={} max_jump={}",
                       a.optimizer, tr.rows.size(), join(tr.start), format_number(tr.start_f),
                       format_number(tr.final_f()), format_number(tr.max_jump()));
  }

  if (a.experiment == "contraction") {
    ContractionOptions opts;
    opts.seed = a.seed;
    if (a.steps) opts.steps = *a.steps;
    const ContractionTrace tr = run_contraction(opts);
    write_contraction_csv(csv, tr);
    const std::size_t last = tr.p_norm.size() - 1;
    const double fit = last >= 2 ? fitted_rate(tr.p_norm, last / 2, last) : tr.predicted_rate;
    return fmt::format("contraction steps={} mu={} kappa={} predicted_rate={} fitted_rate={} "
                       "final_over_initial={}",
                       last, format_number(tr.mu), format_number(tr.kappa),
                       format_number(tr.predicted_rate), format_number(fit),
                       format_number(tr.p_norm.back() / tr.p_norm.front()));
  }

  if (a.experiment == "mlp" || a.experiment == "ablation") {
    if (a.seeds < 1) throw UsageError("--seeds must be >= 1");
    MlpOptions opts;
    if (a.steps) opts.steps = *a.steps;
    opts.warmup_steps = a.warmup;
    std::vector<MlpVariant> variants;
    if (a.experiment == "ablation") {
      variants = ablation_variants(cfg);
    } else if (a.optimizer == "all") {
      variants = mlp_comparison_variants(cfg);
    } else {
      variants = {{a.optimizer, single_method(a.optimizer), cfg}};
    }
    const auto runs = run_mlp_grid(variants, opts, a.seed, a.seeds, a.jobs);
    for (const auto& r : runs) {
      if (r.run.diverged) log.warn("{} seed {} diverged", r.variant, r.seed);
    }
    write_mlp_csv(csv, runs, a.experiment == "ablation" ? "variant" : "optimizer");
    std::string summary = fmt::format("{} seeds={} steps={} median_final_loss:", a.experiment,
                                      a.seeds, opts.steps);
    for (const auto& v : variants) {
      summary += fmt::format(" {}={}", v.name, format_number(median_final_loss(runs, v.name)));
    }
    return summary;
  }

  if (a.experiment == "complexity") {
    ComplexityOptions opts;
    opts.seed = a.seed;
    opts.reps = a.reps;
    const auto rows = run_complexity(opts);
    write_complexity_csv(csv, rows);
    std::string summary = "complexity loglog_slope:";
    for (Index r : opts.ranks) {
      summary += fmt::format(" tracking_r{}={} svd_r{}={}", r,
                             format_number(loglog_slope(rows, "tracking", r)), r,
                             format_number(loglog_slope(rows, "svd", r)));
    }
    return summary;
  }
  throw UsageError("unknown experiment '" + a.experiment + "'");
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Args a;
  CLI::App app{"SubTrack++ desk experiments", "subtrack-bench"};
  app.set_config("--config", "", "INI/TOML file of flag values (flags on the command line win)");
  app.add_option("--experiment", a.experiment, "Experiment to run")
      ->required()
      ->check(CLI::IsMember({"ackley", "contraction", "ablation", "mlp", "complexity"}));
  app.add_option("--optimizer", a.optimizer, "subtrack | galore_like | full_adam (mlp: also all)")
      ->check(CLI::IsMember({"subtrack", "galore_like", "full_adam", "all"}));
  app.add_option("--steps", a.steps, "Optimization steps (default depends on the experiment)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", a.seed, "Seed (mlp/ablation: first of --seeds consecutive seeds)");
  app.add_option("--out", a.out, "CSV output path, '-' for stdout");
  app.add_option("--trace", a.trace, "Per-step engine records as CSV (ackley only)");
  app.add_option("--seeds", a.seeds, "Number of seeds for mlp/ablation");
  app.add_option("--jobs", a.jobs, "Threads for independent mlp/ablation runs")
      ->check(CLI::PositiveNumber);
  app.add_option("--warmup", a.warmup, "Linear learning-rate warmup steps (0 = off)");
  app.add_option("--reps", a.reps, "Timing repetitions for complexity")->check(CLI::PositiveNumber);
  app.add_option("--start", a.start, "Ackley start point (4 values)")->delimiter(',');
  app.add_option("--lr", a.lr, "Learning rate alpha");
  app.add_option("--rank", a.rank, "Projection rank r");
  app.add_option("--interval", a.interval, "Subspace update interval k");
  app.add_option("--eta", a.eta, "Grassmann step size");
  app.add_option("--zeta", a.zeta, "Recovery growth limit");
  app.add_option("--scale", a.scale, "Multiplier on the projected-back update");
  app.add_option("--variance-mode", a.variance_mode, "abs | clip");
  app.add_flag("--no-recovery", a.no_recovery, "Disable recovery scaling");
  app.add_flag("--no-pao", a.no_pao, "Disable projection-aware moment updates");
  app.add_flag("--bias-correction", a.bias_correction, "Adam bias correction (full_adam only)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  auto log = make_logger(err);
  try {
    const SubTrackConfig cfg = build_config(a);

    std::ofstream file;
    const bool to_stdout = a.out.empty() || a.out == "-";
    if (!to_stdout) {
      file.open(a.out, std::ios::binary | std::ios::trunc);
      if (!file) throw UsageError("cannot write output file '" + a.out + "'");
    }
    std::ostream& csv = to_stdout ? out : file;
    const std::string summary = run(a, cfg, csv, *log);
    csv.flush();
    if (!csv) throw std::runtime_error("write to '" + a.out + "' failed");
    (to_stdout ? err : out) << summary << (to_stdout ? "" : " out=" + a.out) << '\n';
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "runtime failure: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace subtrack::bench
