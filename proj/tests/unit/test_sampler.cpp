#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "fringe/error.hpp"
#include "fringe/sampler.hpp"

using namespace fringe;

TEST(Sampler, BalancedDrawsAreBalancedUnderImbalance) {
  std::vector<Label> labels(500, Label::non_deformation);
  for (int i = 0; i < 10; ++i) labels[i * 50] = Label::deformation;
  BalancedSampler s(labels, 32, 3);
  std::size_t pos = 0, total = 0;
  for (int b = 0; b < 500; ++b) {
    for (auto i : s.next_batch()) {
      ASSERT_LT(i, labels.size());
      pos += labels[i] == Label::deformation;
      ++total;
    }
  }
  EXPECT_NEAR(static_cast<double>(pos) / total, 0.5, 0.01);
}

TEST(Sampler, BalancedNeedsBothClasses) {
  std::vector<Label> labels(10, Label::deformation);
  EXPECT_THROW(BalancedSampler(labels, 4, 1), ConfigError);
  labels[0] = Label::non_deformation;
  EXPECT_THROW(BalancedSampler(labels, 0, 1), ConfigError);
  EXPECT_NO_THROW(BalancedSampler(labels, 4, 1));
}

TEST(Sampler, SequentialVisitsEveryIndexOncePerPass) {
  SequentialSampler s(10, 5, 7);
  std::vector<std::size_t> seen;
  for (int b = 0; b < 2; ++b) {
    const auto batch = s.next_batch();
    seen.insert(seen.end(), batch.begin(), batch.end());
  }
  std::sort(seen.begin(), seen.end());
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(seen[i], i);
}

TEST(Sampler, SkipMatchesDrawing) {
  std::vector<Label> labels{Label::deformation, Label::non_deformation, Label::non_deformation};
  BalancedSampler a(labels, 5, 11), b(labels, 5, 11);
  for (int i = 0; i < 3; ++i) a.next_batch();
  b.skip(3);
  EXPECT_EQ(a.next_batch(), b.next_batch());
}

TEST(Sampler, ShuffleIsPermutation) {
  Rng rng(4);
  std::vector<std::size_t> v(100);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
  shuffle_indices(v, rng);
  std::map<std::size_t, int> count;
  for (auto x : v) ++count[x];
  EXPECT_EQ(count.size(), 100u);
}
