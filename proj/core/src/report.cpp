#include "ratebench/report.hpp"

#include <fmt/format.h>
#include <json.hpp>

namespace ratebench {

namespace {

constexpr const char* kConventions[] = {
    "ratio = copies * reference_time / selected_time",
    "selected_time = lower median over iterations",
    "iteration time = phase span, max end - min start (rate); slowest copy's elapsed (rrr)",
    "copy statistics over per-copy elapsed times of the selected iteration",
    "stddev = sample estimator (n-1 divisor); cv = stddev / mean",
    "quartiles = linear interpolation on sorted order statistics, h = (n-1)p",
};

constexpr const char* kExhibition = "exhibition — not a compliant score";

std::string join_times(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += fmt::format("{:.6f}", v[i]);
  }
  return out;
}

nlohmann::json stats_json(const CopyStats& s) {
  return {{"count", s.count}, {"min_s", s.min_s},       {"max_s", s.max_s}, {"mean_s", s.mean_s},
          {"stddev_s", s.stddev_s}, {"cv", s.cv}, {"q1_s", s.q1_s}, {"median_s", s.median_s},
          {"q3_s", s.q3_s}};
}

}  // namespace

std::string render_raw_report(const SuiteScore& score, const MultiprogramReport* rrr, const EnergyReport* energy) {
  std::string out;
  auto line = [&](fmt::string_view f, auto&&... args) {
    out += fmt::vformat(f, fmt::make_format_args(args...));
    out += '\n';
  };

  line("ratebench raw report (format ratebench-report/1)");
  line("{}", std::string(60, '='));
  line("{:<14}{}", "suite:", score.suite_name);
  if (score.mode == RunMode::rrr) {
    line("{:<14}rrr (inc={}, step={})", "mode:", score.params.inc, score.params.step);
  } else {
    line("{:<14}rate", "mode:");
  }
  line("{:<14}{}", "copies:", score.copies);
  line("{:<14}{}", "iterations:", score.iterations);
  for (const auto& [k, v] : score.host) line("{:<14}{} {}", "host:", k, v);
  line("conventions:");
  for (const char* c : kConventions) line("  - {}", c);
  line("");

  for (const auto& b : score.benchmarks) {
    line("benchmark {}", b.bench_id);
    line("  {:<14}{:.6f}", "reference_s", b.reference_time_s);
    line("  {:<14}{}", "iterations_s", join_times(b.iteration_times_s));
    line("  {:<14}{:.6f} (iteration {})", "selected_s", b.selected_time_s, b.selected_iteration);
    line("  {:<14}{:.3f}", "ratio", b.ratio);
    line("  {:<14}{}", "copies_s", join_times(b.copy_times_s));
    line("  {:<14}{:.6f} / {:.6f}", "min / max", b.stats.min_s, b.stats.max_s);
    line("  {:<14}{:.6f} / {:.6f}", "mean / stddev", b.stats.mean_s, b.stats.stddev_s);
    line("  {:<14}{:.6f}", "cv", b.stats.cv);
    line("  {:<14}{:.6f} / {:.6f} / {:.6f}", "q1 / med / q3", b.stats.q1_s, b.stats.median_s, b.stats.q3_s);
    line("  {:<14}{}", "status", b.valid ? "valid" : "INVALID");
    line("");
  }

  line("{}", std::string(60, '-'));
  line("{:<18}{:.3f}", "overall geomean:", score.overall);
  line("{:<18}{}", "compliant:", score.compliant ? "yes" : "no");
  for (const auto& n : score.notes) line("  note: {}", n);

  if (rrr) {
    line("");
    line("RRR candidate metrics ({})", kExhibition);
    line("  {:<16}{:.6f}", "ANTT", rrr->antt);
    line("  {:<16}{:.6f}", "STP", rrr->stp);
    line("  {:<16}{:.6f}", "hmean speedup", rrr->hmean_speedup);
    line("  {:<16}{:.6f}", "fairness", rrr->fairness);
  }
  if (energy) {
    line("");
    line("energy");
    line("  {:<16}{:.3f}", "energy_j", energy->energy_j);
    line("  {:<16}{:.6f}", "span_s", energy->span_s);
    line("  {:<16}{:.3f}", "mean_watts", energy->mean_watts);
    if (energy->energy_ratio) {
      line("  {:<16}{:.3f}", "energy_ratio", *energy->energy_ratio);
    } else {
      line("  {:<16}n/a (no reference energy)", "energy_ratio");
    }
    line("  {:<16}{:.6f}", "perf_per_watt", energy->perf_per_watt);
  }
  return out;
}

std::string scores_json(const SuiteScore& score, const MultiprogramReport* rrr, const EnergyReport* energy) {
  nlohmann::json j;
  j["format"] = "ratebench-scores/1";
  j["suite"] = score.suite_name;
  j["mode"] = to_string(score.mode);
  j["copies"] = score.copies;
  j["iterations"] = score.iterations;
  if (score.mode == RunMode::rrr) {
    j["inc"] = score.params.inc;
    j["step"] = score.params.step;
  }
  j["host"] = score.host;
  j["conventions"] = kConventions;
  auto& benches = j["benchmarks"] = nlohmann::json::array();
  for (const auto& b : score.benchmarks) {
    benches.push_back({{"id", b.bench_id},
                       {"reference_time_s", b.reference_time_s},
                       {"iteration_times_s", b.iteration_times_s},
                       {"selected_time_s", b.selected_time_s},
                       {"selected_iteration", b.selected_iteration},
                       {"ratio", b.ratio},
                       {"copy_times_s", b.copy_times_s},
                       {"copy_stats", stats_json(b.stats)},
                       {"valid", b.valid}});
  }
  j["overall_geomean"] = score.overall;
  j["compliant"] = score.compliant;
  j["notes"] = score.notes;
  if (rrr) j["rrr"] = nlohmann::json::parse(multiprogram_json(*rrr));
  if (energy) {
    j["energy"] = {{"energy_j", energy->energy_j},
                   {"span_s", energy->span_s},
                   {"mean_watts", energy->mean_watts},
                   {"perf_per_watt", energy->perf_per_watt}};
    if (energy->energy_ratio) j["energy"]["energy_ratio"] = *energy->energy_ratio;
  }
  return j.dump(2) + "\n";
}

std::string slowdown_csv(const MultiprogramReport& rrr) {
  std::string out = "bench_id";
  for (std::size_t c = 0; c < rrr.copies; ++c) out += fmt::format(",copy{}", c);
  out += '\n';
  for (std::size_t b = 0; b < rrr.bench_ids.size(); ++b) {
    out += rrr.bench_ids[b];
    for (double s : rrr.slowdown[b]) out += fmt::format(",{:.6f}", s);
    out += '\n';
  }
  return out;
}

std::string multiprogram_json(const MultiprogramReport& rrr) {
  nlohmann::json j;
  j["label"] = kExhibition;
  j["antt"] = rrr.antt;
  j["stp"] = rrr.stp;
  j["stp_per_rotation"] = rrr.stp_per_rotation;
  j["hmean_speedup"] = rrr.hmean_speedup;
  j["fairness"] = rrr.fairness;
  j["definitions"] = {
      {"slowdown", "lower-median contended elapsed / solo_time_s, per benchmark and copy"},
      {"antt", "arithmetic mean of slowdowns"},
      {"stp", "per rotation: time integral of sum(1/slowdown) over resident benchmarks / rotation span; "
              "averaged over rotations"},
      {"hmean_speedup", "harmonic mean of 1/slowdown"},
      {"fairness", "min slowdown / max slowdown"}};
  return j.dump(2) + "\n";
}

}  // namespace ratebench
