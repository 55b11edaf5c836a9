#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fringe/patch.hpp"
#include "fringe/rng.hpp"

namespace fringe {

/// An endless stream of index batches over a dataset.
class BatchSampler {
 public:
  virtual ~BatchSampler() = default;
  virtual std::vector<std::size_t> next_batch() = 0;
  /// Discards n batches.
  void skip(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) (void)next_batch();
  }
};

/// Class-balanced oversampling: every draw first picks class 0 or 1 with
/// equal probability, then a member of that class uniformly with replacement.
class BalancedSampler final : public BatchSampler {
 public:
  /// Throws ConfigError when a class is empty or batch_size is zero.
  BalancedSampler(std::span<const Label> labels, std::size_t batch_size, std::uint64_t seed);

  std::vector<std::size_t> next_batch() override;

  const std::vector<std::size_t>& members(Label l) const { return members_[to_int(l)]; }

 private:
  std::array<std::vector<std::size_t>, 2> members_;
  std::size_t batch_size_;
  Rng rng_;
};

/// Control sampler: shuffles the dataset once per pass and cuts it into
/// consecutive batches, so class frequencies follow the data.
class SequentialSampler final : public BatchSampler {
 public:
  SequentialSampler(std::size_t dataset_size, std::size_t batch_size, std::uint64_t seed);

  std::vector<std::size_t> next_batch() override;

 private:
  void reshuffle();

  std::vector<std::size_t> order_;
  std::size_t cursor_ = 0;
  std::size_t batch_size_;
  Rng rng_;
};

/// Fisher-Yates shuffle driven by uniform_index().
void shuffle_indices(std::vector<std::size_t>& v, Rng& rng);

}  // namespace fringe
