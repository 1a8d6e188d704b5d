#pragma once

#include "ratebench/bbv.hpp"
#include "ratebench/perf_series.hpp"
#include "ratebench/runlog.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ratebench {

// Fixed 20-colour palette indexed by a 64-bit FNV-1a hash of the id, so a
// benchmark keeps its colour across runs and rosters.
std::string bench_color(std::string_view bench_id);

// Layout constants shared by the timeplot emitter and its tests.
struct TimeplotLayout {
  static constexpr double left = 80;
  static constexpr double top = 40;
  static constexpr double plot_width = 1000;
  static constexpr double legend_width = 220;
};

// One rectangle per event: x is seconds from the first start (one global
// scale), y the copy index. Throws std::invalid_argument for an empty log.
std::string timeplot_svg(const RunLog& log);

// Recurrence raster in image order (top row first) with the origin at the
// lower left: image row r shows interval T-1-r. Pixel value is
// round(255 * (1 - D_unitmax[i][j])), so identical intervals are brightest.
std::vector<std::uint8_t> recurrence_pixels(const DistanceMatrix& d);

// Binary PGM (P5) with a format comment.
std::string recurrence_pgm(const DistanceMatrix& d);

// The same raster as SVG rectangles (runs of equal pixels merged per row).
std::string recurrence_svg(const DistanceMatrix& d);

// Stacked panels over a shared instruction axis: the recurrence raster (when
// given), IPC, then frontend/backend-bound percentages. Throws
// std::invalid_argument when the matrix and series interval counts differ.
std::string perf_overlay_svg(const AlignedSeries& series, const DistanceMatrix* matrix = nullptr);

}  // namespace ratebench
