#include "ratebench/metrics.hpp"

#include "ratebench/csv.hpp"
#include "ratebench/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace ratebench {

namespace {

constexpr double kNsPerS = 1e9;

// Events grouped by (bench, copy, iteration).
struct SlotIndex {
  struct Slot {
    std::int64_t busy_ns = 0;  // sum of workload durations
    std::int64_t first_start = std::numeric_limits<std::int64_t>::max();
    std::int64_t last_end = std::numeric_limits<std::int64_t>::min();
    bool ok = true;
  };
  std::map<std::tuple<std::string, std::size_t, std::size_t>, Slot> slots;

  explicit SlotIndex(const RunLog& log) {
    for (const auto& e : log.events) {
      auto& s = slots[{e.bench_id, e.copy, e.iteration}];
      s.busy_ns += e.duration_ns();
      s.first_start = std::min(s.first_start, e.start_ns);
      s.last_end = std::max(s.last_end, e.end_ns);
      s.ok = s.ok && e.exit_ok && e.validation == ValidationStatus::pass;
    }
  }

  const Slot& at(const std::string& bench, std::size_t copy, std::size_t iteration) const {
    auto it = slots.find({bench, copy, iteration});
    if (it == slots.end()) {
      throw FormatError("run log has no events for " + bench + " on copy " + std::to_string(copy) +
                        " iteration " + std::to_string(iteration));
    }
    return it->second;
  }
};

void require_positive(double v, const char* what) {
  if (!(v > 0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

}  // namespace

double geomean(std::span<const double> ratios) {
  if (ratios.empty()) throw std::invalid_argument("geomean of an empty list");
  double log_sum = 0;
  for (double r : ratios) {
    require_positive(r, "geomean input");
    log_sum += std::log(r);
  }
  return std::exp(log_sum / static_cast<double>(ratios.size()));
}

double spec_ratio(double reference_s, double selected_s, std::size_t copies, ScoreMode mode) {
  require_positive(reference_s, "reference time");
  require_positive(selected_s, "selected time");
  if (copies == 0) throw std::invalid_argument("copies must be positive");
  const double base = reference_s / selected_s;
  return mode == ScoreMode::rate ? static_cast<double>(copies) * base : base;
}

double lower_median(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty list");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  return v[(v.size() - 1) / 2];
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of an empty list");
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted[sorted.size() - 1];
  const double q = sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
  return std::clamp(q, sorted[lo], sorted[lo + 1]);
}

CopyStats copy_stats(std::span<const double> times_s) {
  if (times_s.empty()) throw std::invalid_argument("copy_stats of an empty list");
  for (double t : times_s) {
    if (!std::isfinite(t) || t < 0) throw std::invalid_argument("copy times must be finite and non-negative");
  }
  std::vector<double> x(times_s.begin(), times_s.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());

  CopyStats s;
  s.count = x.size();
  s.min_s = x.front();
  s.max_s = x.back();
  s.mean_s = std::accumulate(x.begin(), x.end(), 0.0) / n;
  if (x.size() > 1) {
    double ss = 0;
    for (double v : x) ss += (v - s.mean_s) * (v - s.mean_s);
    s.stddev_s = std::sqrt(ss / (n - 1));
  }
  if (s.min_s == s.max_s) {
    s.stddev_s = 0;
    s.mean_s = s.min_s;
  }
  s.cv = s.mean_s > 0 ? s.stddev_s / s.mean_s : 0.0;
  s.q1_s = quantile_sorted(x, 0.25);
  s.median_s = quantile_sorted(x, 0.5);
  s.q3_s = quantile_sorted(x, 0.75);
  return s;
}

double copy_elapsed_s(const RunLog& log, std::string_view bench_id, std::size_t copy, std::size_t iteration) {
  std::int64_t busy = 0;
  bool found = false;
  for (const auto& e : log.events) {
    if (e.bench_id == bench_id && e.copy == copy && e.iteration == iteration) {
      busy += e.duration_ns();
      found = true;
    }
  }
  if (!found) {
    throw FormatError("run log has no events for " + std::string(bench_id) + " on copy " +
                      std::to_string(copy) + " iteration " + std::to_string(iteration));
  }
  return static_cast<double>(busy) / kNsPerS;
}

SuiteScore score_suite(const RunLog& log, const SuiteConfig& cfg) {
  if (log.copies == 0 || log.iterations == 0) throw FormatError("run log has no copies or iterations");
  const SlotIndex index(log);

  SuiteScore score;
  score.suite_name = log.suite_name.empty() ? cfg.suite_name : log.suite_name;
  score.mode = log.mode;
  score.copies = log.copies;
  score.iterations = log.iterations;
  score.params = log.params;
  score.host = log.host;

  std::vector<double> ratios;
  for (const auto& bench : cfg.roster) {
    BenchmarkScore b;
    b.bench_id = bench.id;
    b.reference_time_s = bench.reference_time_s;
    for (std::size_t r = 1; r <= log.iterations; ++r) {
      std::int64_t lo = std::numeric_limits<std::int64_t>::max();
      std::int64_t hi = std::numeric_limits<std::int64_t>::min();
      std::int64_t slowest = 0;
      for (std::size_t c = 0; c < log.copies; ++c) {
        const auto& slot = index.at(bench.id, c, r);
        lo = std::min(lo, slot.first_start);
        hi = std::max(hi, slot.last_end);
        slowest = std::max(slowest, slot.busy_ns);
        b.valid = b.valid && slot.ok;
      }
      const std::int64_t elapsed = log.mode == RunMode::rate ? hi - lo : slowest;
      b.iteration_times_s.push_back(static_cast<double>(elapsed) / kNsPerS);
    }
    b.selected_time_s = lower_median(b.iteration_times_s);
    for (std::size_t r = 0; r < b.iteration_times_s.size(); ++r) {
      if (b.iteration_times_s[r] == b.selected_time_s) {
        b.selected_iteration = r + 1;
        break;
      }
    }
    if (!(b.selected_time_s > 0)) {
      throw FormatError("benchmark '" + bench.id + "' has zero elapsed time");
    }
    for (std::size_t c = 0; c < log.copies; ++c) {
      b.copy_times_s.push_back(static_cast<double>(index.at(bench.id, c, b.selected_iteration).busy_ns) /
                               kNsPerS);
    }
    b.stats = copy_stats(b.copy_times_s);
    b.ratio = spec_ratio(bench.reference_time_s, b.selected_time_s, log.copies, ScoreMode::rate);
    if (!b.valid) {
      score.compliant = false;
      score.notes.push_back("benchmark " + bench.id + " had failed or unvalidated runs");
    }
    ratios.push_back(b.ratio);
    score.benchmarks.push_back(std::move(b));
  }
  score.overall = geomean(ratios);
  if (!log.errors.empty()) {
    score.compliant = false;
    score.notes.push_back(std::to_string(log.errors.size()) + " harness error(s) during the run");
  }
  for (const auto& w : log.warnings) score.notes.push_back("warning: " + w);
  return score;
}

void fill_slowdown_aggregates(MultiprogramReport& report) {
  double sum = 0, lo = std::numeric_limits<double>::infinity(), hi = 0;
  std::size_t count = 0;
  for (const auto& row : report.slowdown) {
    for (double s : row) {
      if (!(s > 0) || !std::isfinite(s)) throw FormatError("slowdown entries must be positive");
      sum += s;
      lo = std::min(lo, s);
      hi = std::max(hi, s);
      ++count;
    }
  }
  if (count == 0) throw FormatError("empty slowdown matrix");
  report.antt = sum / static_cast<double>(count);
  report.hmean_speedup = static_cast<double>(count) / sum;
  report.fairness = lo == hi ? 1.0 : lo / hi;
}

MultiprogramReport rrr_metrics(const RunLog& log, const SuiteConfig& cfg) {
  const SlotIndex index(log);
  MultiprogramReport rep;
  rep.copies = log.copies;

  std::map<std::string, double> solo;
  for (const auto& id : log.roster) {
    const auto& bench = cfg.roster[roster_index(cfg, id)];
    solo[id] = bench.solo_or_reference_s();
    rep.bench_ids.push_back(id);
  }

  for (const auto& id : rep.bench_ids) {
    std::vector<double> row;
    for (std::size_t c = 0; c < log.copies; ++c) {
      std::vector<double> per_iter;
      for (std::size_t r = 1; r <= log.iterations; ++r) {
        per_iter.push_back(static_cast<double>(index.at(id, c, r).busy_ns) / kNsPerS);
      }
      const double elapsed = lower_median(per_iter);
      if (!(elapsed > 0)) {
        throw FormatError("zero elapsed time for " + id + " on copy " + std::to_string(c));
      }
      row.push_back(elapsed / solo[id]);
    }
    rep.slowdown.push_back(std::move(row));
  }
  fill_slowdown_aggregates(rep);

  for (std::size_t r = 1; r <= log.iterations; ++r) {
    std::int64_t lo = std::numeric_limits<std::int64_t>::max();
    std::int64_t hi = std::numeric_limits<std::int64_t>::min();
    double progress = 0;  // integral of sum(1/s) dt, in seconds
    for (const auto& id : rep.bench_ids) {
      for (std::size_t c = 0; c < log.copies; ++c) {
        const auto& slot = index.at(id, c, r);
        lo = std::min(lo, slot.first_start);
        hi = std::max(hi, slot.last_end);
        const double busy = static_cast<double>(slot.busy_ns) / kNsPerS;
        if (!(busy > 0)) throw FormatError("zero elapsed time for " + id);
        const double resident = static_cast<double>(slot.last_end - slot.first_start) / kNsPerS;
        progress += resident * solo[id] / busy;
      }
    }
    const double window = static_cast<double>(hi - lo) / kNsPerS;
    if (!(window > 0)) throw FormatError("rotation " + std::to_string(r) + " has zero span");
    rep.stp_per_rotation.push_back(progress / window);
  }
  rep.stp = std::accumulate(rep.stp_per_rotation.begin(), rep.stp_per_rotation.end(), 0.0) /
            static_cast<double>(rep.stp_per_rotation.size());
  return rep;
}

std::vector<PowerSample> parse_power_csv(std::string_view text) {
  auto rows = csv::parse(text);
  if (rows.empty() || rows.front().fields != std::vector<std::string>{"t_s", "watts"}) {
    throw FormatError("power CSV header must be 't_s,watts'", rows.empty() ? 0 : rows.front().line);
  }
  std::vector<PowerSample> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.fields.size() != 2) throw FormatError("expected 2 fields", row.line);
    PowerSample s;
    for (int k = 0; k < 2; ++k) {
      const std::string& f = row.fields[k];
      double& dst = k == 0 ? s.t_s : s.watts;
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), dst);
      if (ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(dst)) {
        throw FormatError("bad number '" + f + "'", row.line);
      }
    }
    out.push_back(s);
  }
  return out;
}

double integrate_energy(std::span<const PowerSample> samples, double t0, double t1) {
  if (samples.size() < 2) throw std::invalid_argument("energy integration needs at least two samples");
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i].t_s > samples[i - 1].t_s)) {
      throw std::invalid_argument("power sample timestamps must be strictly increasing");
    }
  }
  if (!(t1 >= t0) || t0 < samples.front().t_s || t1 > samples.back().t_s) {
    throw std::invalid_argument("energy span lies outside the sampled range");
  }
  auto power_at = [](const PowerSample& a, const PowerSample& b, double t) {
    if (t == a.t_s) return a.watts;
    if (t == b.t_s) return b.watts;
    return a.watts + (b.watts - a.watts) * (t - a.t_s) / (b.t_s - a.t_s);
  };
  double joules = 0;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const auto& a = samples[i];
    const auto& b = samples[i + 1];
    const double lo = std::max(a.t_s, t0);
    const double hi = std::min(b.t_s, t1);
    if (hi <= lo) continue;
    joules += 0.5 * (power_at(a, b, lo) + power_at(a, b, hi)) * (hi - lo);
  }
  return joules;
}

EnergyReport energy_report(const RunLog& log, const SuiteScore& score, const SuiteConfig& cfg,
                           std::span<const PowerSample> samples) {
  if (log.events.empty()) throw FormatError("run log has no events");
  std::int64_t lo = std::numeric_limits<std::int64_t>::max();
  std::int64_t hi = std::numeric_limits<std::int64_t>::min();
  for (const auto& e : log.events) {
    lo = std::min(lo, e.start_ns);
    hi = std::max(hi, e.end_ns);
  }
  EnergyReport rep;
  const double t0 = static_cast<double>(lo) / kNsPerS;
  const double t1 = static_cast<double>(hi) / kNsPerS;
  rep.span_s = t1 - t0;
  rep.energy_j = integrate_energy(samples, t0, t1);
  rep.mean_watts = rep.span_s > 0 ? rep.energy_j / rep.span_s : 0;
  rep.perf_per_watt = rep.mean_watts > 0 ? score.overall / rep.mean_watts : 0;

  double reference = 0;
  bool all = true;
  for (const auto& b : cfg.roster) {
    if (!b.reference_energy_j) {
      all = false;
      break;
    }
    reference += *b.reference_energy_j;
  }
  if (all && rep.energy_j > 0) {
    rep.energy_ratio =
        static_cast<double>(log.copies) * static_cast<double>(log.iterations) * reference / rep.energy_j;
  }
  return rep;
}

}  // namespace ratebench
