#include "ratebench/bbv.hpp"
#include "ratebench/metrics.hpp"
#include "ratebench/perf_series.hpp"
#include "ratebench/plot.hpp"
#include "ratebench/report.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <map>
#include <regex>

using namespace ratebench;
using rbtest::make_log;
using rbtest::make_suite;

namespace {

struct Rect {
  std::string id;
  double x = 0, w = 0;
  std::string fill;
};

std::vector<Rect> event_rects(const std::string& svg) {
  static const std::regex re(
      R"re(<rect x="([0-9.]+)" y="[0-9.]+" width="([0-9.]+)" height="[0-9.]+" fill="(#[0-9a-f]{6})" id="(ev-[0-9]+-[0-9]+)")re");
  std::vector<Rect> out;
  for (std::sregex_iterator it(svg.begin(), svg.end(), re), end; it != end; ++it) {
    out.push_back({(*it)[4], std::stod((*it)[1]), std::stod((*it)[2]), (*it)[3]});
  }
  return out;
}

}  // namespace

TEST(Timeplot, HomogeneousBandsAlign) {
  const std::vector<std::string> ids{"x.alpha", "x.beta"};
  const auto log = make_log(make_homogeneous_schedule(2, 2), ids, 1, {{1.0, 2.0}, {1.0, 2.0}});
  const auto svg = timeplot_svg(log);
  const auto rects = event_rects(svg);
  ASSERT_EQ(rects.size(), 4u);
  std::map<std::string, Rect> by_id;
  for (const auto& r : rects) by_id[r.id] = r;
  EXPECT_EQ(by_id["ev-0-0"].fill, by_id["ev-1-0"].fill);
  EXPECT_EQ(by_id["ev-0-0"].fill, bench_color("x.alpha"));
  EXPECT_NEAR(by_id["ev-0-0"].x, by_id["ev-1-0"].x, 1e-9);
  EXPECT_NEAR(by_id["ev-0-0"].w, by_id["ev-1-0"].w, 1e-9);
  EXPECT_NE(svg.find("x.alpha"), std::string::npos);
  EXPECT_NE(svg.find("x.beta"), std::string::npos);
}

TEST(Timeplot, RrrFirstRectangleFollowsRotation) {
  const std::vector<std::string> ids{"r.a", "r.b", "r.c"};
  const auto sched = make_rrr_schedule(3, 3, {1, 1});
  const auto log = make_log(sched, ids, 1, {{1, 1, 1}, {1, 1, 1}, {1, 1, 1}});
  std::map<std::string, Rect> by_id;
  for (const auto& r : event_rects(timeplot_svg(log))) by_id[r.id] = r;
  for (std::size_t c = 0; c < 3; ++c) {
    EXPECT_EQ(by_id["ev-" + std::to_string(c) + "-0"].fill, bench_color(ids[c % 3]));
  }
}

TEST(Timeplot, WidthProportionalToDuration) {
  const std::vector<std::string> ids{"a", "b"};
  const auto log = make_log(make_rrr_schedule(2, 1, {1, 1}), ids, 1, {{1.0, 3.0}});
  const auto rects = event_rects(timeplot_svg(log));
  ASSERT_EQ(rects.size(), 2u);
  EXPECT_NEAR(rects[1].w / rects[0].w, 3.0, 1e-2);
  EXPECT_NEAR(rects[0].w + rects[1].w, TimeplotLayout::plot_width, 1e-2);
}

TEST(Timeplot, EmptyLogRejected) {
  EXPECT_THROW(timeplot_svg(RunLog{}), std::invalid_argument);
}

TEST(Timeplot, Deterministic) {
  const std::vector<std::string> ids{"a", "b"};
  const auto log = make_log(make_rrr_schedule(2, 2, {1, 1}), ids, 2, {{1.0, 3.0}, {2.0, 0.5}});
  EXPECT_EQ(timeplot_svg(log), timeplot_svg(log));
}

TEST(BenchColor, StableHex) {
  EXPECT_EQ(bench_color("syn.spin"), bench_color("syn.spin"));
  EXPECT_TRUE(std::regex_match(bench_color("q"), std::regex("#[0-9a-f]{6}")));
}

TEST(Recurrence, TwoByTwoMaxOffDiagonal) {
  DistanceMatrix d;
  d.size = 2;
  d.values = {0, 3, 3, 0};
  const auto px = recurrence_pixels(d);
  EXPECT_EQ(px, (std::vector<std::uint8_t>{0, 255, 255, 0}));
}

TEST(Recurrence, LowerLeftOrigin) {
  DistanceMatrix d;
  d.size = 2;
  d.values = {0, 1, 1, 0.5};
  d = to_unit_max(d);
  // Image row 0 shows interval 1: pixel(1,0) then pixel(1,1).
  const auto px = recurrence_pixels(d);
  EXPECT_EQ(px[0], 0);
  EXPECT_EQ(px[1], 128);
  EXPECT_EQ(px[2], 255);
}

TEST(Recurrence, PgmHeaderAndSymmetry) {
  std::mt19937_64 rng(41);
  const auto d = distance_matrix(normalize_l1(rbtest::random_trace(rng, 12, 20, 6)));
  const auto pgm = recurrence_pgm(d);
  const std::string header = "P5\n# ratebench-recurrence/1\n12 12\n255\n";
  ASSERT_EQ(pgm.substr(0, header.size()), header);
  EXPECT_EQ(pgm.size(), header.size() + 144);
  const auto px = recurrence_pixels(d);
  auto at = [&](std::size_t i, std::size_t j) { return px[(11 - i) * 12 + j]; };
  for (std::size_t i = 0; i < 12; ++i) {
    for (std::size_t j = 0; j < 12; ++j) EXPECT_EQ(at(i, j), at(j, i));
  }
  EXPECT_EQ(recurrence_pgm(d), pgm);
  EXPECT_NE(recurrence_svg(d).find("<svg"), std::string::npos);
}

TEST(PerfOverlay, MismatchRejected) {
  std::vector<CounterSample> s(2);
  s[1].instructions = 1200;
  s[1].cycles = 600;
  const auto series = resample_to_instructions(s, 100);
  ASSERT_EQ(series.size(), 12u);
  std::string text;
  for (int i = 0; i < 10; ++i) text += "T:1:1\n";
  const auto d = distance_matrix(parse_bb(text));
  EXPECT_THROW(perf_overlay_svg(series, &d), std::invalid_argument);
  EXPECT_NO_THROW(perf_overlay_svg(series));
}

TEST(PerfOverlay, TwoPhaseStepAtMidpoint) {
  std::vector<CounterSample> s(3);
  s[1].instructions = 400;
  s[1].cycles = 100;
  s[2].instructions = 800;
  s[2].cycles = 500;
  const auto svg = perf_overlay_svg(resample_to_instructions(s, 100));
  EXPECT_NE(svg.find("IPC"), std::string::npos);
  EXPECT_EQ(svg, perf_overlay_svg(resample_to_instructions(s, 100)));
}

TEST(RawReport, SingleBenchmarkRatioOne) {
  const std::vector<std::string> ids{"solo"};
  const auto log = make_log(make_homogeneous_schedule(1, 1), ids, 3, {{2.0}});
  const auto score = score_suite(log, make_suite(ids, {2.0}));
  const auto text = render_raw_report(score);
  EXPECT_NE(text.find("overall geomean:  1.000"), std::string::npos);
  EXPECT_NE(text.find("ratebench-report/1"), std::string::npos);
  EXPECT_EQ(text, render_raw_report(score));
}

TEST(RawReport, RrrFooterLabeledExhibition) {
  const std::vector<std::string> ids{"a", "b"};
  const auto log = make_log(make_rrr_schedule(2, 2, {1, 1}), ids, 1, {{1.0, 2.0}, {2.0, 1.0}});
  const auto cfg = make_suite(ids, {5.0, 5.0});
  const auto score = score_suite(log, cfg);
  const auto rrr = rrr_metrics(log, cfg);
  const auto text = render_raw_report(score, &rrr);
  EXPECT_NE(text.find("exhibition \xe2\x80\x94 not a compliant score"), std::string::npos);
  EXPECT_NE(text.find("ANTT"), std::string::npos);
  EXPECT_NE(text.find("fairness"), std::string::npos);
  EXPECT_NE(scores_json(score, &rrr).find("ratebench-scores/1"), std::string::npos);
  EXPECT_EQ(slowdown_csv(rrr).substr(0, 22), "bench_id,copy0,copy1\na");
}
