#include "ratebench/plot.hpp"

#include "ratebench/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include <fmt/format.h>

namespace ratebench {

namespace {

constexpr const char* kPalette[] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
    "#aec7e8", "#ffbb78", "#98df8a", "#ff9896", "#c5b0d5", "#c49c94", "#f7b6d2", "#c7c7c7", "#dbdb8d", "#9edae5",
};

std::string gray(std::uint8_t v) { return fmt::format("#{:02x}{:02x}{:02x}", v, v, v); }

// Emits the raster into `doc` with its top-left at (x0, y0).
void raster(svg::Document& doc, const DistanceMatrix& d, double x0, double y0, double cell) {
  const auto px = recurrence_pixels(d);
  const std::size_t n = d.size;
  for (std::size_t r = 0; r < n; ++r) {
    std::size_t c = 0;
    while (c < n) {
      std::size_t e = c;
      while (e + 1 < n && px[r * n + e + 1] == px[r * n + c]) ++e;
      doc.rect(x0 + static_cast<double>(c) * cell, y0 + static_cast<double>(r) * cell,
               static_cast<double>(e - c + 1) * cell, cell, gray(px[r * n + c]), "shape-rendering=\"crispEdges\"");
      c = e + 1;
    }
  }
}

}  // namespace

std::string bench_color(std::string_view bench_id) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bench_id) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return kPalette[h % std::size(kPalette)];
}

std::string timeplot_svg(const RunLog& log) {
  if (log.events.empty()) throw std::invalid_argument("timeplot: run log has no events");
  using L = TimeplotLayout;
  std::int64_t t0 = std::numeric_limits<std::int64_t>::max();
  std::int64_t t1 = std::numeric_limits<std::int64_t>::min();
  std::size_t copies = log.copies;
  for (const auto& e : log.events) {
    t0 = std::min(t0, e.start_ns);
    t1 = std::max(t1, e.end_ns);
    copies = std::max(copies, e.copy + 1);
  }
  const double span_s = std::max(1e-9, static_cast<double>(t1 - t0) / 1e9);
  const double scale = L::plot_width / span_s;  // px per second
  const double row = std::clamp(600.0 / static_cast<double>(copies), 4.0, 24.0);
  const double plot_height = row * static_cast<double>(copies);

  // Legend: roster order, then any ids only seen in events.
  std::vector<std::string> legend = log.roster;
  for (const auto& e : log.events) {
    if (std::find(legend.begin(), legend.end(), e.bench_id) == legend.end()) legend.push_back(e.bench_id);
  }
  const double height = std::max(L::top + plot_height + 60, L::top + 20.0 * static_cast<double>(legend.size()) + 40);
  svg::Document doc(L::left + L::plot_width + L::legend_width, height, "ratebench-timeplot/1");

  std::string title = fmt::format("{} {} M={} R={}", log.suite_name, to_string(log.mode), log.copies, log.iterations);
  if (log.mode == RunMode::rrr) title += fmt::format(" inc={} step={}", log.params.inc, log.params.step);
  doc.text(L::left, 20, title, 14);

  std::map<std::size_t, std::size_t> ordinal;
  for (std::size_t c = 0; c < copies; ++c) {
    doc.open_group(fmt::format("copy-{}", c));
    for (const auto& e : log.events) {
      if (e.copy != c) continue;
      const double x = L::left + static_cast<double>(e.start_ns - t0) / 1e9 * scale;
      const double w = static_cast<double>(e.duration_ns()) / 1e9 * scale;
      const double y = L::top + static_cast<double>(c) * row;
      std::string extra = fmt::format("id=\"ev-{}-{}\"", c, ordinal[c]++);
      if (!e.exit_ok || e.validation == ValidationStatus::fail) extra += " stroke=\"#000000\" stroke-width=\"1\"";
      doc.rect(x, y, w, row * 0.9, bench_color(e.bench_id), extra);
    }
    doc.close_group();
  }

  // Axes.
  const double axis_y = L::top + plot_height + 4;
  doc.line(L::left, axis_y, L::left + L::plot_width, axis_y, "#000000");
  for (int k = 0; k <= 5; ++k) {
    const double x = L::left + L::plot_width * k / 5.0;
    doc.line(x, axis_y, x, axis_y + 5, "#000000");
    doc.text(x, axis_y + 18, fmt::format("{:.3f}", span_s * k / 5.0), 10, "middle");
  }
  doc.text(L::left + L::plot_width / 2, axis_y + 34, "seconds from run start", 11, "middle");
  for (std::size_t c = 0; c < copies; c += std::max<std::size_t>(1, copies / 12)) {
    doc.text(L::left - 6, L::top + (static_cast<double>(c) + 0.7) * row, fmt::format("copy {}", c), 10, "end");
  }

  const double lx = L::left + L::plot_width + 20;
  doc.open_group("legend");
  for (std::size_t i = 0; i < legend.size(); ++i) {
    const double ly = L::top + 20.0 * static_cast<double>(i);
    doc.rect(lx, ly, 14, 14, bench_color(legend[i]));
    doc.text(lx + 20, ly + 11, legend[i], 11);
  }
  doc.close_group();
  return doc.finish();
}

std::vector<std::uint8_t> recurrence_pixels(const DistanceMatrix& d) {
  const DistanceMatrix u = to_unit_max(d);
  const std::size_t n = u.size;
  std::vector<std::uint8_t> px(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t i = n - 1 - r;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = std::clamp(1.0 - u(i, j), 0.0, 1.0);
      px[r * n + j] = static_cast<std::uint8_t>(std::lround(255.0 * v));
    }
  }
  return px;
}

std::string recurrence_pgm(const DistanceMatrix& d) {
  std::string out = fmt::format("P5\n# ratebench-recurrence/1\n{} {}\n255\n", d.size, d.size);
  const auto px = recurrence_pixels(d);
  out.append(px.begin(), px.end());
  return out;
}

std::string recurrence_svg(const DistanceMatrix& d) {
  const double cell = std::max(1.0, std::floor(512.0 / static_cast<double>(std::max<std::size_t>(1, d.size))));
  const double side = cell * static_cast<double>(d.size);
  svg::Document doc(side + 40, side + 40, "ratebench-recurrence-svg/1");
  doc.open_group("raster");
  raster(doc, d, 20, 20, cell);
  doc.close_group();
  return doc.finish();
}

std::string perf_overlay_svg(const AlignedSeries& series, const DistanceMatrix* matrix) {
  if (series.intervals.empty()) throw std::invalid_argument("perf overlay: series is empty");
  if (matrix && matrix->size != series.size()) {
    throw std::invalid_argument(fmt::format("perf overlay: interval-count mismatch (matrix {}, series {})",
                                            matrix->size, series.size()));
  }
  const double left = 70, width = 600, panel = 160, gap = 40;
  const std::size_t n = series.size();
  const double cell = width / static_cast<double>(n);
  double y = 30;
  const double raster_h = matrix ? width : 0;
  const double height = y + raster_h + (matrix ? gap : 0) + 2 * (panel + gap) + 30;
  svg::Document doc(left + width + 160, height, "ratebench-perf-overlay/1");
  doc.text(left, 18, fmt::format("interval = {} instructions", series.interval_instructions), 12);

  if (matrix) {
    doc.open_group("recurrence");
    raster(doc, *matrix, left, y, cell);
    doc.close_group();
    y += raster_h + gap;
  }

  // Step lines: flat across each interval so phase changes show as steps.
  auto steps = [&](auto value, double y0, double ymax) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t k = 0; k < n; ++k) {
      const double v = std::clamp(value(series.intervals[k].breakdown), 0.0, ymax);
      const double py = y0 + panel - panel * v / ymax;
      pts.emplace_back(left + cell * static_cast<double>(k), py);
      pts.emplace_back(left + cell * static_cast<double>(k + 1), py);
    }
    return pts;
  };
  auto frame = [&](double y0, std::string_view label, double ymax, std::string_view unit) {
    doc.line(left, y0 + panel, left + width, y0 + panel, "#000000");
    doc.line(left, y0, left, y0 + panel, "#000000");
    doc.text(left - 6, y0 + 10, fmt::format("{:g}{}", ymax, unit), 10, "end");
    doc.text(left - 6, y0 + panel, fmt::format("0{}", unit), 10, "end");
    doc.text(left + width + 10, y0 + 12, label, 11);
  };

  double ipc_max = 1.0;
  for (const auto& iv : series.intervals) ipc_max = std::max(ipc_max, iv.breakdown.ipc);
  ipc_max = std::ceil(ipc_max);
  doc.open_group("ipc");
  frame(y, "IPC", ipc_max, "");
  doc.polyline(steps([](const TopDownBreakdown& b) { return b.ipc; }, y, ipc_max), "#1f77b4", 1.5);
  doc.close_group();
  y += panel + gap;

  doc.open_group("topdown");
  frame(y, "frontend / backend bound", 100, "%");
  if (series.intervals.front().breakdown.has_topdown) {
    doc.polyline(steps([](const TopDownBreakdown& b) { return 100 * b.clamped().frontend; }, y, 100), "#17becf", 1.5);
    doc.polyline(steps([](const TopDownBreakdown& b) { return 100 * b.clamped().backend; }, y, 100), "#e377c2", 1.5);
    doc.text(left + width + 10, y + 30, "frontend", 10);
    doc.text(left + width + 10, y + 44, "backend", 10);
  } else {
    doc.text(left + width / 2, y + panel / 2, "top-down counters unavailable", 11, "middle");
  }
  doc.close_group();
  y += panel + 4;

  for (int k = 0; k <= 4; ++k) {
    const double x = left + width * k / 4.0;
    const double instr = static_cast<double>(series.interval_instructions) * static_cast<double>(n) * k / 4.0;
    doc.text(x, y + 14, fmt::format("{:.3g}", instr), 10, "middle");
  }
  doc.text(left + width / 2, y + 28, "instructions", 11, "middle");
  return doc.finish();
}

}  // namespace ratebench
