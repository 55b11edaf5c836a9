#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "fringe/rng.hpp"

using namespace fringe;

TEST(Rng, DerivedSeedsDependOnEveryKey) {
  const auto a = derive_seed(7, {1, 2});
  EXPECT_EQ(a, derive_seed(7, {1, 2}));
  EXPECT_NE(a, derive_seed(7, {2, 1}));
  EXPECT_NE(a, derive_seed(8, {1, 2}));
  EXPECT_NE(a, derive_seed(7, {1, 2, 0}));
}

TEST(Rng, LabelKeysDiffer) {
  EXPECT_NE(label_key("pretrain"), label_key("finetune"));
  EXPECT_EQ(label_key("x"), label_key("x"));
}

TEST(Rng, Uniform01InUnitInterval) {
  Rng rng(3);
  double sum = 0;
  for (int i = 0; i < 100000; ++i) {
    const double u = uniform01(rng);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 0.01);
}

TEST(Rng, UniformIndexCoversRange) {
  Rng rng(5);
  std::set<std::size_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto k = uniform_index(rng, 7);
    ASSERT_LT(k, 7u);
    seen.insert(k);
  }
  EXPECT_EQ(seen.size(), 7u);
}

TEST(Rng, BernoulliEdgesConsumeNothing) {
  Rng a(9), b(9);
  EXPECT_FALSE(bernoulli(a, 0.0));
  EXPECT_TRUE(bernoulli(a, 1.0));
  EXPECT_EQ(a(), b());
}

TEST(Rng, StandardNormalMoments) {
  Rng rng(11);
  double s = 0, s2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = standard_normal(rng);
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

TEST(Rng, StateRoundTrip) {
  Rng rng(13);
  for (int i = 0; i < 10; ++i) rng();
  Rng copy = rng_state_from_string(rng_state_to_string(rng));
  for (int i = 0; i < 10; ++i) EXPECT_EQ(rng(), copy());
}
