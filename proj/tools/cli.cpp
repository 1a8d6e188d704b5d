#include "cli.hpp"

#include "ratebench/bbv.hpp"
#include "ratebench/error.hpp"
#include "ratebench/executor.hpp"
#include "ratebench/files.hpp"
#include "ratebench/host.hpp"
#include "ratebench/metrics.hpp"
#include "ratebench/perf_series.hpp"
#include "ratebench/plot.hpp"
#include "ratebench/report.hpp"
#include "ratebench/runlog.hpp"
#include "ratebench/scheduler.hpp"
#include "ratebench/suite.hpp"
#include "ratebench/synthetic.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

namespace ratebench::cli {
namespace fs = std::filesystem;

namespace {

struct RunArgs {
  std::string suite;
  std::string mode = "rate";
  std::size_t copies = 1;
  std::size_t inc = 1;
  std::size_t step = 1;
  std::size_t iterations = 3;
  std::vector<int> pin;
  std::string out;
  std::vector<std::string> benchmarks;
  std::string power;
  std::string harness;
};

struct ScoreArgs {
  std::string log;
  std::string suite;
  std::string out;
  std::string power;
};

struct BbvArgs {
  std::string trace;
  std::string out;
  std::vector<std::string> formats{"pgm"};
  std::uint64_t interval = kDefaultIntervalInstructions;
  bool raw = false;
  unsigned threads = 1;
};

struct PerfArgs {
  std::string samples;
  std::uint64_t interval = 0;
  std::string bbv;
  std::string out;
  std::size_t smooth = 1;
};

struct SynthArgs {
  std::string kind;
  std::uint64_t units = 0;
  std::uint64_t mib = 8;
  std::string out;
};

void make_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

std::vector<PowerSample> load_power(const std::string& path) {
  if (path.empty()) return {};
  return parse_power_csv(read_file(path));
}

std::map<std::string, std::vector<std::string>> workload_names(const SuiteConfig& cfg) {
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& b : cfg.roster) {
    for (const auto& w : b.workloads) out[b.id].push_back(w.name);
  }
  return out;
}

// Writes report.txt, scores.json and the rrr files. Returns the score.
SuiteScore write_scores(const RunLog& log, const SuiteConfig& cfg, const std::string& power, const fs::path& out) {
  SuiteScore score = score_suite(log, cfg);
  std::optional<MultiprogramReport> rrr;
  if (log.mode == RunMode::rrr) rrr = rrr_metrics(log, cfg);
  std::optional<EnergyReport> energy;
  if (!power.empty()) {
    auto samples = load_power(power);
    energy = energy_report(log, score, cfg, samples);
  }
  const MultiprogramReport* rrr_ptr = rrr ? &*rrr : nullptr;
  const EnergyReport* energy_ptr = energy ? &*energy : nullptr;
  write_file(out / "report.txt", render_raw_report(score, rrr_ptr, energy_ptr));
  write_file(out / "scores.json", scores_json(score, rrr_ptr, energy_ptr));
  if (rrr) {
    write_file(out / "rrr_slowdown.csv", slowdown_csv(*rrr));
    write_file(out / "rrr_metrics.json", multiprogram_json(*rrr));
  }
  return score;
}

int cmd_run(const RunArgs& a, bool rrr_flags_given, std::ostream& out) {
  const RunMode mode = parse_run_mode(a.mode);
  if (mode == RunMode::rate && rrr_flags_given) {
    throw ConfigError("--inc and --step apply to --mode rrr only");
  }
  SuiteConfig cfg = load_suite(a.suite);
  if (!a.benchmarks.empty()) cfg = subset_suite(cfg, a.benchmarks);

  Schedule sched = mode == RunMode::rate ? make_homogeneous_schedule(cfg.size(), a.copies)
                                         : make_rrr_schedule(cfg.size(), a.copies, {a.inc, a.step});
  AffinityPolicy affinity;
  if (!a.pin.empty()) affinity = AffinityPolicy::pin_list(a.pin);

  const fs::path out_dir = a.out;
  make_out_dir(out_dir);
  const auto ids = cfg.ids();
  write_file(out_dir / "schedule.csv", schedule_csv(sched, ids));

  ExecOptions opts;
  if (!a.harness.empty()) opts.harness = a.harness;
  RunLog log = execute(sched, cfg, a.iterations, affinity, out_dir / "run", opts);

  write_file(out_dir / "runlog.csv", runlog_csv(log));
  write_file(out_dir / "runlog.json", runlog_sidecar_json(log));
  write_file(out_dir / "validation.json", failures_json(log));
  write_file(out_dir / "timeplot.svg", timeplot_svg(log));
  SuiteScore score = write_scores(log, cfg, a.power, out_dir);

  for (const auto& w : log.warnings) out << "warning: " << w << '\n';
  out << "overall geomean " << score.overall << (score.compliant ? " (compliant)" : " (NOT compliant)") << '\n';
  out << "artifacts written to " << out_dir.string() << '\n';
  if (!log.errors.empty()) return kExecFailure;
  return score.compliant ? kSuccess : kNonCompliant;
}

int cmd_score(const ScoreArgs& a, std::ostream& out) {
  RunLog log = load_runlog(a.log);
  SuiteConfig cfg = load_suite(a.suite);
  for (const auto& id : log.roster) {
    bool known = false;
    for (const auto& b : cfg.roster) known = known || b.id == id;
    if (!known) throw ConfigError("run log benchmark '" + id + "' is not in suite " + cfg.suite_name);
  }
  cfg = subset_suite(cfg, log.roster);
  check_complete(log, workload_names(cfg));
  const fs::path out_dir = a.out;
  make_out_dir(out_dir);
  SuiteScore score = write_scores(log, cfg, a.power, out_dir);
  out << "overall geomean " << score.overall << (score.compliant ? " (compliant)" : " (NOT compliant)") << '\n';
  return score.compliant ? kSuccess : kNonCompliant;
}

int cmd_bbv(const BbvArgs& a, std::ostream& out) {
  BBVTrace trace = load_bb(a.trace, a.interval);
  if (!a.raw) trace = normalize_l1(trace);
  DistanceMatrix d = distance_matrix(trace, a.threads);
  const fs::path out_dir = a.out;
  make_out_dir(out_dir);
  for (const auto& f : a.formats) {
    if (f == "pgm") {
      write_file(out_dir / "recurrence.pgm", recurrence_pgm(d));
    } else if (f == "svg") {
      write_file(out_dir / "recurrence.svg", recurrence_svg(d));
    } else if (f == "csv") {
      write_file(out_dir / "distance.csv", matrix_csv(d));
    } else {
      throw ConfigError("unknown --format '" + f + "' (pgm, svg, csv)");
    }
  }
  out << trace.size() << " intervals, max distance " << d.max() << '\n';
  return kSuccess;
}

int cmd_perfplot(const PerfArgs& a, std::ostream& out) {
  if (a.interval == 0) throw ConfigError("--interval must be positive");
  AlignedSeries series = smooth(resample_to_instructions(load_samples(a.samples), a.interval), a.smooth);
  std::optional<DistanceMatrix> matrix;
  if (!a.bbv.empty()) matrix = distance_matrix(normalize_l1(load_bb(a.bbv, a.interval)));
  const std::string svg_text = perf_overlay_svg(series, matrix ? &*matrix : nullptr);
  const fs::path out_dir = a.out;
  make_out_dir(out_dir);
  write_file(out_dir / "series.csv", series_csv(series));
  write_file(out_dir / "perf_overlay.svg", svg_text);
  out << series.size() << " intervals of " << a.interval << " instructions\n";
  return kSuccess;
}

int cmd_synth(const SynthArgs& a) {
  return synth_main({parse_synth_kind(a.kind), a.units, a.mib}, a.out);
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"ratebench: multi-copy rate and rolling round-robin benchmark harness"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ratebench 0.1.0");

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Execute a suite in rate or rrr mode and score it");
  run_cmd->add_option("--suite", run_args.suite, "Suite config (TOML)")->required();
  run_cmd->add_option("--mode", run_args.mode, "rate | rrr")->check(CLI::IsMember({"rate", "rrr"}));
  run_cmd->add_option("--copies", run_args.copies, "Number of copies M")->check(CLI::PositiveNumber);
  auto* inc_opt = run_cmd->add_option("--inc", run_args.inc, "rrr start-offset stride between copies (default 1)");
  auto* step_opt = run_cmd->add_option("--step", run_args.step, "rrr stride through the roster (default 1)");
  run_cmd->add_option("--iterations", run_args.iterations, "Iterations R (default 3)")->check(CLI::PositiveNumber);
  run_cmd->add_option("--pin", run_args.pin, "Comma-separated logical core per copy")->delimiter(',');
  run_cmd->add_option("--out", run_args.out, "Output directory")->required();
  run_cmd->add_option("--benchmarks", run_args.benchmarks, "Comma-separated roster subset")->delimiter(',');
  run_cmd->add_option("--power", run_args.power, "Power samples CSV (t_s,watts) for energy");
  run_cmd->add_option("--harness", run_args.harness, "Executable substituted for @harness (default: this binary)");

  ScoreArgs score_args;
  auto* score_cmd = app.add_subcommand("score", "Re-score a stored run log");
  score_cmd->add_option("--log", score_args.log, "Run log CSV (sidecar JSON read alongside)")->required();
  score_cmd->add_option("--suite", score_args.suite, "Suite config (TOML)")->required();
  score_cmd->add_option("--out", score_args.out, "Output directory")->required();
  score_cmd->add_option("--power", score_args.power, "Power samples CSV (t_s,watts) for energy");

  BbvArgs bbv_args;
  auto* bbv_cmd = app.add_subcommand("bbv", "Distance matrix and recurrence plot of a .bb trace");
  bbv_cmd->add_option("--trace", bbv_args.trace, "SimPoint-style .bb file")->required();
  bbv_cmd->add_option("--out", bbv_args.out, "Output directory")->required();
  bbv_cmd->add_option("--format", bbv_args.formats, "pgm | svg | csv (comma-separated)")->delimiter(',');
  bbv_cmd->add_option("--interval", bbv_args.interval, "Instructions per interval (default 10000000)");
  bbv_cmd->add_flag("--raw", bbv_args.raw, "Use raw counts instead of L1-normalized frequencies");
  bbv_cmd->add_option("--threads", bbv_args.threads, "Worker threads for the matrix")->check(CLI::PositiveNumber);

  PerfArgs perf_args;
  auto* perf_cmd = app.add_subcommand("perfplot", "Top-down series aligned to instructions, optional BBV overlay");
  perf_cmd->add_option("--samples", perf_args.samples, "Cumulative counter CSV")->required();
  perf_cmd->add_option("--interval", perf_args.interval, "Instructions per interval")->required();
  perf_cmd->add_option("--bbv", perf_args.bbv, "Matching .bb trace for the recurrence panel");
  perf_cmd->add_option("--out", perf_args.out, "Output directory")->required();
  perf_cmd->add_option("--smooth", perf_args.smooth, "Moving-average width in intervals (default 1)");

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "Run one deterministic synthetic benchmark");
  synth_cmd->add_option("--kind", synth_args.kind, "spin | stream | mixed")->required();
  synth_cmd->add_option("--units", synth_args.units, "Work units (positive)")->required();
  synth_cmd->add_option("--mib", synth_args.mib, "Buffer size for stream/mixed (default 8)");
  synth_cmd->add_option("--out", synth_args.out, "Checksum output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (*run_cmd) return cmd_run(run_args, inc_opt->count() > 0 || step_opt->count() > 0, out);
    if (*score_cmd) return cmd_score(score_args, out);
    if (*bbv_cmd) return cmd_bbv(bbv_args, out);
    if (*perf_cmd) return cmd_perfplot(perf_args, out);
    if (*synth_cmd) return cmd_synth(synth_args);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ScheduleError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExecFailure;
  }
  return kUsageError;
}

}  // namespace ratebench::cli
