#include "ratebench/perf_series.hpp"

#include "ratebench/csv.hpp"
#include "ratebench/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace ratebench {

namespace {

constexpr double kBand = 0.02;

std::uint64_t parse_counter(const std::string& s, std::size_t line, const std::string& column) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc() && ptr == s.data() + s.size() && !s.empty()) return v;
  // Counters exported in real notation ("1e9") are accepted when integral.
  double d = 0;
  auto [dptr, dec] = std::from_chars(s.data(), s.data() + s.size(), d);
  if (dec == std::errc() && dptr == s.data() + s.size() && !s.empty() && std::isfinite(d) && d >= 0 &&
      d < 1.8e19 && std::floor(d) == d) {
    return static_cast<std::uint64_t>(d);
  }
  throw FormatError("column " + column + ": bad counter value '" + s + "'", line);
}

// Value of a cumulative counter at instruction point p, rounded to a whole
// count. `pick` extracts the counter from a sample.
template <typename Pick>
std::uint64_t counter_at(const std::vector<CounterSample>& s, std::uint64_t p, Pick pick) {
  if (p <= s.front().instructions) return pick(s.front());
  if (p >= s.back().instructions) return pick(s.back());
  // First sample reaching p; the one before it lies strictly below p.
  auto it = std::lower_bound(s.begin(), s.end(), p,
                             [](const CounterSample& c, std::uint64_t v) { return c.instructions < v; });
  const CounterSample& b = *it;
  const CounterSample& a = *(it - 1);
  __extension__ using u128 = unsigned __int128;
  const u128 dx = pick(b) - pick(a);
  const u128 num = dx * (p - a.instructions);
  const u128 den = b.instructions - a.instructions;
  return pick(a) + static_cast<std::uint64_t>((num + den / 2) / den);
}

}  // namespace

TopDownBreakdown TopDownBreakdown::clamped() const {
  TopDownBreakdown out = *this;
  out.frontend = std::clamp(frontend, 0.0, 1.0);
  out.badspec = std::clamp(badspec, 0.0, 1.0);
  out.retiring = std::clamp(retiring, 0.0, 1.0);
  out.backend = std::clamp(backend, 0.0, 1.0);
  return out;
}

std::vector<CounterSample> parse_samples(std::string_view csv_text) {
  auto rows = csv::parse(csv_text);
  if (rows.empty()) throw FormatError("counter CSV is empty");
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < rows[0].fields.size(); ++i) col[rows[0].fields[i]] = i;
  for (const char* need : {"instructions", "cycles"}) {
    if (!col.count(need)) throw FormatError(std::string("counter CSV is missing column '") + need + "'", rows[0].line);
  }
  const char* slot_cols[] = {"slots_total", "slots_retiring", "slots_frontend", "slots_badspec"};
  int present = 0;
  for (const char* c : slot_cols) present += col.count(c) ? 1 : 0;
  if (present != 0 && present != 4) {
    throw FormatError("slot columns must be given together (slots_total, slots_retiring, slots_frontend, slots_badspec)",
                      rows[0].line);
  }
  const bool with_slots = present == 4;

  std::vector<CounterSample> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() != rows[0].fields.size()) {
      throw FormatError("expected " + std::to_string(rows[0].fields.size()) + " fields", row.line);
    }
    auto get = [&](const char* name) { return parse_counter(row.fields[col.at(name)], row.line, name); };
    CounterSample s;
    s.instructions = get("instructions");
    s.cycles = get("cycles");
    if (with_slots) {
      s.slots = CounterSample::Slots{get("slots_total"), get("slots_retiring"), get("slots_frontend"),
                                     get("slots_badspec")};
      const auto& sl = *s.slots;
      if (sl.retiring > sl.total || sl.frontend > sl.total || sl.badspec > sl.total) {
        throw FormatError("slot category exceeds slots_total", row.line);
      }
    }
    if (!out.empty()) {
      const auto& p = out.back();
      auto check = [&](std::uint64_t prev, std::uint64_t cur, const char* name) {
        if (cur < prev) throw FormatError(std::string("cumulative column '") + name + "' decreases", row.line);
      };
      check(p.instructions, s.instructions, "instructions");
      check(p.cycles, s.cycles, "cycles");
      if (with_slots) {
        check(p.slots->total, s.slots->total, "slots_total");
        check(p.slots->retiring, s.slots->retiring, "slots_retiring");
        check(p.slots->frontend, s.slots->frontend, "slots_frontend");
        check(p.slots->badspec, s.slots->badspec, "slots_badspec");
      }
    }
    out.push_back(s);
  }
  return out;
}

std::vector<CounterSample> load_samples(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_samples(buf.str());
}

TopDownBreakdown topdown_level1(const WindowDelta& d) {
  if (!(d.cycles > 0)) throw std::invalid_argument("top-down window has zero cycles");
  TopDownBreakdown b;
  b.ipc = d.instructions / d.cycles;
  if (!d.slots_total) return b;
  if (!(*d.slots_total > 0)) throw std::invalid_argument("top-down window has zero slots");
  const double total = *d.slots_total;
  b.has_topdown = true;
  b.frontend = d.slots_frontend.value_or(0) / total;
  b.badspec = d.slots_badspec.value_or(0) / total;
  b.retiring = d.slots_retiring.value_or(0) / total;
  b.backend = 1.0 - b.frontend - b.badspec - b.retiring;
  for (double f : {b.frontend, b.badspec, b.retiring, b.backend}) {
    if (f < -kBand || f > 1 + kBand) {
      throw std::invalid_argument("top-down fractions outside [-0.02, 1.02]: categories exceed total slots");
    }
  }
  return b;
}

TopDownBreakdown breakdown_from_fractions(double ipc, double frontend, double badspec, double retiring) {
  TopDownBreakdown b;
  b.ipc = ipc;
  b.has_topdown = true;
  b.frontend = frontend;
  b.badspec = badspec;
  b.retiring = retiring;
  b.backend = 1.0 - frontend - badspec - retiring;
  return b;
}

AlignedSeries resample_to_instructions(const std::vector<CounterSample>& samples,
                                       std::uint64_t interval_instructions) {
  if (samples.size() < 2) throw std::invalid_argument("resampling needs at least two samples");
  if (interval_instructions == 0) throw std::invalid_argument("interval must be positive");
  const std::uint64_t first = samples.front().instructions;
  const std::uint64_t last = samples.back().instructions;
  if (last <= first) throw std::invalid_argument("counter stream retires no instructions");
  const bool with_slots = std::all_of(samples.begin(), samples.end(), [](const auto& s) { return s.slots.has_value(); });

  const std::uint64_t total = last - first;
  const std::uint64_t count = total / interval_instructions + (total % interval_instructions ? 1 : 0);

  struct Point {
    std::uint64_t instructions, cycles;
    CounterSample::Slots slots;
  };
  auto at = [&](std::uint64_t p) {
    Point pt{p, counter_at(samples, p, [](const CounterSample& c) { return c.cycles; }), {}};
    if (with_slots) {
      pt.slots.total = counter_at(samples, p, [](const CounterSample& c) { return c.slots->total; });
      pt.slots.retiring = counter_at(samples, p, [](const CounterSample& c) { return c.slots->retiring; });
      pt.slots.frontend = counter_at(samples, p, [](const CounterSample& c) { return c.slots->frontend; });
      pt.slots.badspec = counter_at(samples, p, [](const CounterSample& c) { return c.slots->badspec; });
    }
    return pt;
  };

  AlignedSeries series;
  series.interval_instructions = interval_instructions;
  series.intervals.reserve(count);
  Point prev = at(first);
  for (std::uint64_t k = 1; k <= count; ++k) {
    const std::uint64_t p = k == count ? last : first + k * interval_instructions;
    Point cur = at(p);
    AlignedInterval iv;
    iv.instructions = cur.instructions - prev.instructions;
    iv.cycles = cur.cycles - prev.cycles;
    WindowDelta d{static_cast<double>(iv.instructions), static_cast<double>(iv.cycles), {}, {}, {}, {}};
    if (with_slots) {
      iv.slots = CounterSample::Slots{cur.slots.total - prev.slots.total, cur.slots.retiring - prev.slots.retiring,
                                      cur.slots.frontend - prev.slots.frontend,
                                      cur.slots.badspec - prev.slots.badspec};
      d.slots_total = static_cast<double>(iv.slots->total);
      d.slots_retiring = static_cast<double>(iv.slots->retiring);
      d.slots_frontend = static_cast<double>(iv.slots->frontend);
      d.slots_badspec = static_cast<double>(iv.slots->badspec);
    }
    iv.breakdown = topdown_level1(d);
    series.intervals.push_back(iv);
    prev = cur;
  }
  return series;
}

AlignedSeries smooth(const AlignedSeries& series, std::size_t width) {
  if (width <= 1 || series.intervals.empty()) return series;
  AlignedSeries out = series;
  const std::size_t n = series.size();
  const std::size_t half = width / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n - 1, i + (width - 1 - half));
    double ipc = 0, fe = 0, bs = 0, ret = 0;
    for (std::size_t k = lo; k <= hi; ++k) {
      const auto& b = series.intervals[k].breakdown;
      ipc += b.ipc;
      fe += b.frontend;
      bs += b.badspec;
      ret += b.retiring;
    }
    const double m = static_cast<double>(hi - lo + 1);
    auto& b = out.intervals[i].breakdown;
    b.ipc = ipc / m;
    b.frontend = fe / m;
    b.badspec = bs / m;
    b.retiring = ret / m;
    b.backend = 1.0 - b.frontend - b.badspec - b.retiring;
  }
  return out;
}

std::string series_csv(const AlignedSeries& series) {
  std::string out = "interval,ipc,frontend,badspec,retiring,backend\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& b = series.intervals[i].breakdown;
    if (b.has_topdown) {
      out += fmt::format("{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n", i, b.ipc, b.frontend, b.badspec, b.retiring,
                         b.backend);
    } else {
      out += fmt::format("{},{:.6f},,,,\n", i, b.ipc);
    }
  }
  return out;
}

}  // namespace ratebench
