#include "darp/types.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

using darp::Rng;

TEST(Rng, DeterministicAcrossInstances) {
  Rng a(12345), b(12345);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(a.below(1000000), b.below(1000000));
}

TEST(Rng, DifferentSeedsDiverge) {
  Rng a(1), b(2);
  bool differ = false;
  for (int i = 0; i < 64 && !differ; ++i) differ = a.below(1u << 30) != b.below(1u << 30);
  EXPECT_TRUE(differ);
}

TEST(Rng, BelowStaysInRange) {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) EXPECT_LT(rng.below(17), 17u);
  EXPECT_EQ(rng.below(1), 0u);
  EXPECT_THROW(rng.below(0), std::invalid_argument);
}

TEST(Rng, InRange) {
  Rng rng(9);
  for (int i = 0; i < 1000; ++i) {
    const auto v = rng.in_range(50, 60);
    EXPECT_GE(v, 50u);
    EXPECT_LT(v, 60u);
  }
  EXPECT_THROW(rng.in_range(5, 5), std::invalid_argument);
}

TEST(Rng, BelowIsUniformEnough) {
  // 100k draws over 4 buckets: each within 3 sigma of 25000
  // (binomial sigma = sqrt(100000 * 0.25 * 0.75) ~ 136.9).
  Rng rng(42);
  std::vector<int> counts(4, 0);
  for (int i = 0; i < 100000; ++i) ++counts[rng.below(4)];
  const double sigma = std::sqrt(100000 * 0.25 * 0.75);
  for (int c : counts) {
    EXPECT_GT(c, 25000 - 3 * sigma);
    EXPECT_LT(c, 25000 + 3 * sigma);
  }
}

TEST(Rng, ShuffleIsAPermutation) {
  Rng rng(3);
  std::vector<int> xs(100);
  std::iota(xs.begin(), xs.end(), 0);
  auto shuffled = xs;
  rng.shuffle(shuffled);
  EXPECT_NE(shuffled, xs);  // astronomically unlikely to be identity
  auto sorted = shuffled;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, xs);
}

TEST(Rng, ShuffleDeterministic) {
  std::vector<int> a(50), b(50);
  std::iota(a.begin(), a.end(), 0);
  std::iota(b.begin(), b.end(), 0);
  Rng ra(77), rb(77);
  ra.shuffle(a);
  rb.shuffle(b);
  EXPECT_EQ(a, b);
}

TEST(Errors, HierarchyAndMessages) {
  const darp::ParseError p("bad line");
  const darp::ValidationError v("bad value");
  const darp::IoError io("bad file");
  const darp::SolverError s("bad solve");
  EXPECT_STREQ(p.what(), "bad line");
  EXPECT_STREQ(v.what(), "bad value");
  EXPECT_STREQ(io.what(), "bad file");
  EXPECT_STREQ(s.what(), "bad solve");
  const std::runtime_error* base = &p;
  EXPECT_NE(base, nullptr);
}

TEST(SolveStatus, Names) {
  EXPECT_STREQ(darp::to_string(darp::SolveStatus::optimal), "optimal");
  EXPECT_STREQ(darp::to_string(darp::SolveStatus::feasible), "feasible");
  EXPECT_STREQ(darp::to_string(darp::SolveStatus::timeout), "timeout");
  EXPECT_STREQ(darp::to_string(darp::SolveStatus::error), "error");
}
