#pragma once

#include "ratebench/runlog.hpp"
#include "ratebench/suite.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ratebench {

// Geometric mean exp(mean(ln r)). Throws std::invalid_argument on an empty
// list or a non-positive / non-finite entry.
double geomean(std::span<const double> ratios);

enum class ScoreMode { rate, speed };

// rate: copies * ref / selected. speed: ref / selected.
double spec_ratio(double reference_s, double selected_s, std::size_t copies, ScoreMode mode);

// Lower median: the middle element for odd n, the lower of the two middle
// elements for even n.
double lower_median(std::span<const double> values);

// Linear-interpolation quantile on sorted data: h = (n-1)p,
// q = x[floor h] + (h - floor h)(x[floor h + 1] - x[floor h]).
double quantile_sorted(std::span<const double> sorted, double p);

// Across-copy population statistics. Sample standard deviation (n-1
// divisor, 0 for n = 1).
struct CopyStats {
  std::size_t count = 0;
  double min_s = 0, max_s = 0, mean_s = 0, stddev_s = 0, cv = 0;
  double q1_s = 0, median_s = 0, q3_s = 0;
};

CopyStats copy_stats(std::span<const double> times_s);

struct BenchmarkScore {
  std::string bench_id;
  double reference_time_s = 0;
  std::vector<double> iteration_times_s;  // index r-1 for iteration r
  double selected_time_s = 0;
  std::size_t selected_iteration = 1;
  double ratio = 0;
  std::vector<double> copy_times_s;  // per copy, in the selected iteration
  CopyStats stats;
  bool valid = true;  // every event ran and validated
};

struct SuiteScore {
  std::string suite_name;
  RunMode mode = RunMode::rate;
  std::size_t copies = 1;
  std::size_t iterations = 1;
  RRRParams params;
  std::vector<BenchmarkScore> benchmarks;  // suite roster order
  double overall = 0;
  bool compliant = true;
  std::vector<std::string> notes;  // reasons for non-compliance and run warnings
  std::map<std::string, std::string> host;
};

// Per-copy elapsed of one benchmark in one iteration: the sum of its workload
// event durations (process lifetimes only).
double copy_elapsed_s(const RunLog& log, std::string_view bench_id, std::size_t copy, std::size_t iteration);

// Scores every roster entry of `cfg`. Iteration elapsed time is the phase
// span (max end - min start) in rate mode and the slowest copy's elapsed in
// rrr mode; the selected time is the lower median over iterations.
// Throws FormatError if a roster benchmark is missing from the log.
SuiteScore score_suite(const RunLog& log, const SuiteConfig& cfg);

// Candidate multiprogram metrics for rrr runs. Not a compliant score.
struct MultiprogramReport {
  std::vector<std::string> bench_ids;          // rows
  std::size_t copies = 0;                      // columns
  std::vector<std::vector<double>> slowdown;   // [bench][copy]
  double antt = 0;                             // mean slowdown
  double stp = 0;                              // mean over rotations
  std::vector<double> stp_per_rotation;
  double hmean_speedup = 0;                    // harmonic mean of 1/s
  double fairness = 0;                         // min s / max s
};

// Slowdown s[b][c] = lower median over iterations of the copy's elapsed time
// for b, divided by b's solo time. STP for one rotation integrates the sum of
// 1/s over the benchmarks resident at each instant, divided by the rotation's
// wall span. Throws FormatError on missing data or zero elapsed time.
MultiprogramReport rrr_metrics(const RunLog& log, const SuiteConfig& cfg);

// Aggregates over an explicit slowdown matrix (every entry > 0).
void fill_slowdown_aggregates(MultiprogramReport& report);

struct PowerSample {
  double t_s = 0;
  double watts = 0;
};

// CSV with header "t_s,watts". Throws FormatError on malformed rows.
std::vector<PowerSample> parse_power_csv(std::string_view text);

// Trapezoidal energy in joules over [t0, t1], with the power linearly
// interpolated at the clipped ends. Throws std::invalid_argument for fewer
// than two samples, non-increasing timestamps, or a span outside the samples.
double integrate_energy(std::span<const PowerSample> samples, double t0, double t1);

struct EnergyReport {
  double energy_j = 0;
  double span_s = 0;
  double mean_watts = 0;
  std::optional<double> energy_ratio;  // when every benchmark has a reference energy
  double perf_per_watt = 0;            // overall ratio / mean watts
};

// Integrates power over the run span (first event start to last event end,
// idle tails included). The reference energy is the sum of the roster's
// reference_energy_j, scaled by copies and iterations to match the work done.
EnergyReport energy_report(const RunLog& log, const SuiteScore& score, const SuiteConfig& cfg,
                           std::span<const PowerSample> samples);

}  // namespace ratebench
