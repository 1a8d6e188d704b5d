#include "ratebench/bbv.hpp"
#include "ratebench/error.hpp"
#include "ratebench/plot.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace ratebench;

TEST(ParseBb, SparseVectors) {
  const auto t = parse_bb("# comment\nT:45:1024 :189:99\n\nT:1:3\n", 100);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t.interval_instructions, 100u);
  EXPECT_EQ(t.intervals[0].entries.size(), 2u);
  EXPECT_EQ(t.intervals[0].entries[0].first, 45u);
  EXPECT_DOUBLE_EQ(t.intervals[0].total(), 1123.0);
}

TEST(ParseBb, MalformedLineNumber) {
  try {
    parse_bb("T:1:2\nT:1:x\n");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_bb("# only comments\n"), FormatError);
  EXPECT_THROW(parse_bb("X:1:2\n"), FormatError);
}

TEST(Normalize, UnitL1) {
  const auto t = normalize_l1(parse_bb("T:1:1 :2:3\n"));
  EXPECT_DOUBLE_EQ(t.intervals[0].entries[0].second, 0.25);
  EXPECT_TRUE(t.normalized);
  BBVTrace zero;
  zero.intervals.push_back(BBVector{});
  EXPECT_THROW(normalize_l1(zero), std::invalid_argument);
}

TEST(BbvDistance, DisjointUnitVectors) {
  const auto t = normalize_l1(parse_bb("T:1:7\nT:2:9\n"));
  EXPECT_NEAR(bbv_distance(t.intervals[0], t.intervals[1]), std::sqrt(2.0), 1e-12);
}

TEST(DistanceMatrix, MetricProperties) {
  std::mt19937_64 rng(17);
  const auto trace = normalize_l1(rbtest::random_trace(rng, 60, 40, 12));
  const auto d = distance_matrix(trace, 3);
  for (std::size_t i = 0; i < d.size; ++i) {
    EXPECT_EQ(d(i, i), 0.0);
    for (std::size_t j = 0; j < d.size; ++j) ASSERT_EQ(d(i, j), d(j, i));
  }
  std::uniform_int_distribution<std::size_t> pick(0, d.size - 1);
  for (int k = 0; k < 500; ++k) {
    const auto i = pick(rng), j = pick(rng), l = pick(rng);
    EXPECT_LE(d(i, l), d(i, j) + d(j, l) + 1e-9);
  }
}

TEST(DistanceMatrix, MatchesDenseOracle) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    auto trace = rbtest::random_trace(rng, 25, 300, 30);
    if (trial % 2 == 0) trace = normalize_l1(trace);
    const auto d = distance_matrix(trace, 1 + trial % 3);
    const auto dense = rbtest::dense_distance_matrix(trace);
    for (std::size_t k = 0; k < dense.size(); ++k) {
      ASSERT_NEAR(d.values[k], dense[k], 1e-9 * std::max(1.0, dense[k]));
    }
  }
}

TEST(DistanceMatrix, ThreadCountDoesNotChangeResult) {
  std::mt19937_64 rng(29);
  const auto trace = normalize_l1(rbtest::random_trace(rng, 40, 50, 10));
  EXPECT_EQ(distance_matrix(trace, 1).values, distance_matrix(trace, 4).values);
}

TEST(DistanceMatrix, ConstantTraceIsAllBright) {
  std::string text;
  for (int i = 0; i < 8; ++i) text += "T:3:10 :9:5\n";
  const auto d = distance_matrix(normalize_l1(parse_bb(text)));
  EXPECT_EQ(d.max(), 0.0);
  for (auto px : recurrence_pixels(d)) EXPECT_EQ(px, 255);
  EXPECT_EQ(to_unit_max(d).values, d.values);
}

TEST(DistanceMatrix, UnitMaxScaling) {
  const auto d = to_unit_max(distance_matrix(parse_bb("T:1:1\nT:1:3\nT:1:5\n")));
  EXPECT_EQ(d.scale, MatrixScale::unit_max);
  EXPECT_DOUBLE_EQ(d(0, 2), 1.0);
  EXPECT_DOUBLE_EQ(d(0, 1), 0.5);
}

TEST(MatrixCsv, FullPrecision) {
  const auto d = distance_matrix(normalize_l1(parse_bb("T:1:1\nT:2:1\n")));
  EXPECT_EQ(matrix_csv(d), "0,1.4142135623730951\n1.4142135623730951,0\n");
}
