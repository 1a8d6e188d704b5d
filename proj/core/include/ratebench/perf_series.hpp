#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ratebench {

// Cumulative counters at one sampling point.
struct CounterSample {
  std::uint64_t instructions = 0;
  std::uint64_t cycles = 0;
  // Pipeline slots: present together or absent.
  struct Slots {
    std::uint64_t total = 0;
    std::uint64_t retiring = 0;
    std::uint64_t frontend = 0;
    std::uint64_t badspec = 0;
  };
  std::optional<Slots> slots;
};

// Counter differences over one window.
struct WindowDelta {
  double instructions = 0;
  double cycles = 0;
  std::optional<double> slots_total, slots_retiring, slots_frontend, slots_badspec;
};

// Level-1 top-down breakdown. backend is the residual, so the four
// fractions always sum to exactly one.
struct TopDownBreakdown {
  double ipc = 0;
  bool has_topdown = false;
  double frontend = 0, badspec = 0, retiring = 0, backend = 0;

  // The fractions clamped to [0, 1] for display.
  TopDownBreakdown clamped() const;
};

// Header must name instructions and cycles; slots_total, slots_retiring,
// slots_frontend and slots_badspec are optional as a group. Other columns are
// ignored. Throws FormatError on non-monotone counters or missing columns.
std::vector<CounterSample> parse_samples(std::string_view csv_text);
std::vector<CounterSample> load_samples(const std::filesystem::path& path);

// Throws std::invalid_argument for zero cycles or zero slot totals, and when
// the categories overshoot the slot total by more than the rounding band
// (raw fractions must stay within [-0.02, 1.02]).
TopDownBreakdown topdown_level1(const WindowDelta& delta);

// Breakdown from already-computed fractions (published tables); backend is
// recomputed as the residual of the other three.
TopDownBreakdown breakdown_from_fractions(double ipc, double frontend, double badspec, double retiring);

struct AlignedInterval {
  std::uint64_t instructions = 0;  // delta within the interval
  std::uint64_t cycles = 0;
  std::optional<CounterSample::Slots> slots;
  TopDownBreakdown breakdown;
};

struct AlignedSeries {
  std::uint64_t interval_instructions = 0;
  std::vector<AlignedInterval> intervals;

  std::size_t size() const noexcept { return intervals.size(); }
};

// Interpolates every cumulative counter linearly at instruction boundaries
// first + k*interval and converts the per-interval deltas to breakdowns.
// Interpolated values are rounded to whole counts, so per-interval deltas sum
// exactly to the stream totals. The interval count is
// ceil(total instructions / interval); an interval larger than the stream
// gives a single interval. Throws std::invalid_argument for fewer than two
// samples, a zero interval, or a stream with no retired instructions.
AlignedSeries resample_to_instructions(const std::vector<CounterSample>& samples,
                                       std::uint64_t interval_instructions);

// Centered moving average of the breakdowns, truncated at the ends
// (width 1 = unchanged).
AlignedSeries smooth(const AlignedSeries& series, std::size_t width);

// CSV: interval,ipc,frontend,badspec,retiring,backend
std::string series_csv(const AlignedSeries& series);

}  // namespace ratebench
