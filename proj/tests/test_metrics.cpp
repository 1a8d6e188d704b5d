#include "ratebench/error.hpp"
#include "ratebench/metrics.hpp"
#include "ratebench/runlog.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace ratebench;
using rbtest::make_log;
using rbtest::make_suite;

TEST(Geomean, Fixtures) {
  const std::vector<double> a{1, 4}, b{2, 8, 4};
  EXPECT_NEAR(geomean(a), 2.0, 1e-12);
  EXPECT_NEAR(geomean(b), 4.0, 1e-12);
  EXPECT_THROW(geomean(std::vector<double>{}), std::invalid_argument);
  EXPECT_THROW(geomean(std::vector<double>{1, 0}), std::invalid_argument);
  EXPECT_THROW(geomean(std::vector<double>{1, -2}), std::invalid_argument);
}

TEST(Geomean, PermutationInvariant) {
  std::mt19937_64 rng(3);
  std::vector<double> v(17);
  std::uniform_real_distribution<double> d(0.1, 100);
  for (auto& x : v) x = d(rng);
  const double base = geomean(v);
  EXPECT_NEAR(base, rbtest::brute_geomean(v), 1e-12 * base);
  for (int i = 0; i < 50; ++i) {
    std::shuffle(v.begin(), v.end(), rng);
    EXPECT_NEAR(geomean(v), base, 1e-12 * base);
  }
}

TEST(SpecRatio, RateScalesWithCopies) {
  EXPECT_DOUBLE_EQ(spec_ratio(100, 50, 4, ScoreMode::rate), 8.0);
  EXPECT_DOUBLE_EQ(spec_ratio(100, 50, 4, ScoreMode::speed), 2.0);
  EXPECT_THROW(spec_ratio(100, 0, 1, ScoreMode::rate), std::invalid_argument);
}

TEST(LowerMedian, OddAndEven) {
  EXPECT_DOUBLE_EQ(lower_median(std::vector<double>{3, 1, 2}), 2.0);
  EXPECT_DOUBLE_EQ(lower_median(std::vector<double>{4, 1, 3, 2}), 2.0);
  EXPECT_DOUBLE_EQ(lower_median(std::vector<double>{5}), 5.0);
}

TEST(CopyStats, QuartileFixture) {
  const auto s = copy_stats(std::vector<double>{1, 2, 3, 4});
  EXPECT_DOUBLE_EQ(s.q1_s, 1.75);
  EXPECT_DOUBLE_EQ(s.median_s, 2.5);
  EXPECT_DOUBLE_EQ(s.q3_s, 3.25);
}

TEST(CopyStats, SampleStddevFixture) {
  const auto s = copy_stats(std::vector<double>{2, 4, 4, 4, 5, 5, 7, 9});
  EXPECT_DOUBLE_EQ(s.mean_s, 5.0);
  EXPECT_NEAR(s.stddev_s, std::sqrt(32.0 / 7.0), 1e-12);
  EXPECT_NEAR(s.stddev_s, 2.138, 5e-4);
  EXPECT_NEAR(s.cv, 0.4276, 5e-5);
  EXPECT_EQ(s.count, 8u);
}

TEST(CopyStats, SingleValue) {
  const auto s = copy_stats(std::vector<double>{3});
  EXPECT_EQ(s.stddev_s, 0.0);
  EXPECT_EQ(s.q1_s, 3.0);
  EXPECT_EQ(s.q3_s, 3.0);
}

TEST(CopyStats, MatchesBruteForce) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    std::vector<double> v(std::uniform_int_distribution<int>(1, 60)(rng));
    std::lognormal_distribution<double> d(0, 1);
    for (auto& x : v) x = d(rng);
    const auto s = copy_stats(v);
    const auto o = rbtest::brute_stats(v);
    auto near = [](double a, double b) { return std::fabs(a - b) <= 1e-9 * std::max(1.0, std::fabs(b)); };
    EXPECT_TRUE(near(s.mean_s, o.mean));
    EXPECT_TRUE(near(s.stddev_s, o.stddev));
    EXPECT_TRUE(near(s.q1_s, o.q1));
    EXPECT_TRUE(near(s.q3_s, o.q3));
    EXPECT_EQ(s.min_s, o.min);
    EXPECT_EQ(s.max_s, o.max);
  }
}

TEST(ScoreSuite, RateIterationIsPhaseSpan) {
  const std::vector<std::string> ids{"a", "b"};
  const auto sched = make_homogeneous_schedule(2, 2);
  const auto log = make_log(sched, ids, 3, {{1.0, 2.0}, {3.0, 1.0}});
  const auto cfg = make_suite(ids, {30.0, 20.0});
  const auto score = score_suite(log, cfg);
  ASSERT_EQ(score.benchmarks.size(), 2u);
  EXPECT_NEAR(score.benchmarks[0].selected_time_s, 3.0, 1e-9);
  EXPECT_NEAR(score.benchmarks[0].ratio, 2 * 30.0 / 3.0, 1e-9);
  EXPECT_NEAR(score.benchmarks[1].ratio, 2 * 20.0 / 2.0, 1e-9);
  EXPECT_NEAR(score.overall, std::sqrt(20.0 * 20.0), 1e-9);
  EXPECT_TRUE(score.compliant);
  EXPECT_NEAR(score.benchmarks[0].stats.mean_s, 2.0, 1e-9);
}

TEST(ScoreSuite, SelectsLowerMedianIteration) {
  const std::vector<std::string> ids{"a"};
  auto log = make_log(make_homogeneous_schedule(1, 1), ids, 3, {{1.0}});
  // Stretch iteration 1 to 5 s and iteration 3 to 2 s.
  for (auto& e : log.events) {
    if (e.iteration == 1) e.end_ns = e.start_ns + 5'000'000'000;
    if (e.iteration == 3) e.end_ns = e.start_ns + 2'000'000'000;
  }
  const auto score = score_suite(log, make_suite(ids, {10.0}));
  EXPECT_EQ(score.benchmarks[0].selected_iteration, 3u);
  EXPECT_NEAR(score.benchmarks[0].selected_time_s, 2.0, 1e-9);
}

TEST(ScoreSuite, ValidationFailureMakesNonCompliant) {
  const std::vector<std::string> ids{"a", "b"};
  auto log = make_log(make_homogeneous_schedule(2, 1), ids, 1, {{1.0, 1.0}});
  log.events[1].validation = ValidationStatus::fail;
  const auto score = score_suite(log, make_suite(ids, {1.0, 1.0}));
  EXPECT_FALSE(score.compliant);
  EXPECT_FALSE(score.benchmarks[1].valid);
  EXPECT_FALSE(score.notes.empty());
  EXPECT_GT(score.overall, 0.0);
}

TEST(ScoreSuite, RrrUsesSlowestCopy) {
  const std::vector<std::string> ids{"a", "b"};
  const auto sched = make_rrr_schedule(2, 2, {1, 1});
  const auto log = make_log(sched, ids, 1, {{1.0, 2.0}, {4.0, 3.0}});
  const auto score = score_suite(log, make_suite(ids, {8.0, 8.0}));
  // Copy 1 runs b first (4 s) then a (3 s).
  EXPECT_NEAR(score.benchmarks[0].selected_time_s, 3.0, 1e-9);
  EXPECT_NEAR(score.benchmarks[1].selected_time_s, 4.0, 1e-9);
}

TEST(ScoreSuite, ReferenceScalingPreservesRelativeScores) {
  const std::vector<std::string> ids{"a", "b", "c"};
  const auto la = make_log(make_homogeneous_schedule(3, 2), ids, 3, {{1.0, 2.0, 3.0}, {1.5, 2.5, 2.0}});
  const auto lb = make_log(make_rrr_schedule(3, 2, {1, 1}), ids, 3, {{0.7, 1.9, 4.0}, {2.5, 1.0, 0.8}});
  const std::vector<double> ref{11.0, 23.0, 7.0};
  const double base = score_suite(la, make_suite(ids, ref)).overall / score_suite(lb, make_suite(ids, ref)).overall;
  for (double k : {0.1, 3.0, 1000.0}) {
    std::vector<double> scaled;
    for (double r : ref) scaled.push_back(r * k);
    const double q = score_suite(la, make_suite(ids, scaled)).overall / score_suite(lb, make_suite(ids, scaled)).overall;
    EXPECT_NEAR(q / base, 1.0, 1e-12);
  }
}

TEST(MultiprogramMetrics, AllEqualSlowdowns) {
  MultiprogramReport r;
  r.slowdown = {{2.5, 2.5}, {2.5, 2.5}};
  fill_slowdown_aggregates(r);
  EXPECT_DOUBLE_EQ(r.fairness, 1.0);
  EXPECT_DOUBLE_EQ(r.antt, 2.5);
  EXPECT_DOUBLE_EQ(r.hmean_speedup, 0.4);
}

TEST(MultiprogramMetrics, TwoValueFixture) {
  MultiprogramReport r;
  r.slowdown = {{1.0, 2.0}};
  fill_slowdown_aggregates(r);
  EXPECT_DOUBLE_EQ(r.fairness, 0.5);
  EXPECT_DOUBLE_EQ(r.antt, 1.5);
  EXPECT_NEAR(r.hmean_speedup, 2.0 / 3.0, 1e-15);
}

TEST(MultiprogramMetrics, FromLog) {
  const std::vector<std::string> ids{"a", "b"};
  const auto sched = make_rrr_schedule(2, 2, {1, 1});
  const auto log = make_log(sched, ids, 3, {{2.0, 4.0}, {4.0, 2.0}});
  const auto r = rrr_metrics(log, make_suite(ids, {9.0, 9.0}, {1.0, 2.0}));
  ASSERT_EQ(r.slowdown.size(), 2u);
  EXPECT_NEAR(r.slowdown[0][0], 2.0, 1e-9);
  EXPECT_NEAR(r.slowdown[1][0], 2.0, 1e-9);
  EXPECT_NEAR(r.slowdown[0][1], 2.0, 1e-9);
  EXPECT_NEAR(r.antt, 2.0, 1e-9);
  EXPECT_NEAR(r.fairness, 1.0, 1e-9);
  // Two copies each progressing at half speed for the whole rotation.
  EXPECT_NEAR(r.stp, 1.0, 1e-9);
  EXPECT_EQ(r.stp_per_rotation.size(), 3u);
}

TEST(Energy, ConstantPower) {
  const std::vector<PowerSample> s{{0, 100}, {10, 100}};
  EXPECT_EQ(integrate_energy(s, 0, 10), 1000.0);
}

TEST(Energy, Ramp) {
  const std::vector<PowerSample> s{{0, 0}, {10, 100}};
  EXPECT_EQ(integrate_energy(s, 0, 10), 500.0);
}

TEST(Energy, ClippedSpan) {
  const std::vector<PowerSample> s{{0, 0}, {10, 100}};
  EXPECT_DOUBLE_EQ(integrate_energy(s, 2, 6), 160.0);
  const std::vector<PowerSample> c{{0, 100}, {4, 100}, {10, 100}};
  EXPECT_DOUBLE_EQ(integrate_energy(c, 3, 5), 200.0);
  EXPECT_THROW(integrate_energy(s, -1, 5), std::invalid_argument);
  EXPECT_THROW(integrate_energy(std::vector<PowerSample>{{0, 1}}, 0, 0), std::invalid_argument);
}

TEST(Energy, ParsePowerCsv) {
  const auto s = parse_power_csv("t_s,watts\n0,10\n1,20\n");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[1].watts, 20.0);
  EXPECT_THROW(parse_power_csv("t_s,watts\n0,abc\n"), FormatError);
}

TEST(Energy, ReportRatio) {
  const std::vector<std::string> ids{"a"};
  const auto log = make_log(make_homogeneous_schedule(1, 1), ids, 1, {{10.0}});
  auto cfg = make_suite(ids, {10.0});
  cfg.roster[0].reference_energy_j = 500.0;
  const auto score = score_suite(log, cfg);
  const std::vector<PowerSample> s{{0, 100}, {10, 100}};
  const auto e = energy_report(log, score, cfg, s);
  EXPECT_NEAR(e.energy_j, 1000.0, 1e-9);
  EXPECT_NEAR(e.mean_watts, 100.0, 1e-9);
  ASSERT_TRUE(e.energy_ratio.has_value());
  EXPECT_NEAR(*e.energy_ratio, 0.5, 1e-12);
}
