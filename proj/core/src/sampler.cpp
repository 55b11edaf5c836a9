#include "fringe/sampler.hpp"

#include <numeric>
#include <utility>

#include "fringe/error.hpp"

namespace fringe {

void shuffle_indices(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[uniform_index(rng, i)]);
  }
}

BalancedSampler::BalancedSampler(std::span<const Label> labels, std::size_t batch_size, std::uint64_t seed)
    : batch_size_(batch_size), rng_(seed) {
  if (batch_size == 0) throw ConfigError("batch size must be >= 1");
  for (std::size_t i = 0; i < labels.size(); ++i) members_[to_int(labels[i])].push_back(i);
  if (members_[0].empty()) throw ConfigError("balanced sampler: class 0 has no samples");
  if (members_[1].empty()) throw ConfigError("balanced sampler: class 1 has no samples");
}

std::vector<std::size_t> BalancedSampler::next_batch() {
  std::vector<std::size_t> batch(batch_size_);
  for (auto& idx : batch) {
    const auto& pool = members_[bernoulli(rng_, 0.5) ? 1 : 0];
    idx = pool[uniform_index(rng_, pool.size())];
  }
  return batch;
}

SequentialSampler::SequentialSampler(std::size_t dataset_size, std::size_t batch_size, std::uint64_t seed)
    : order_(dataset_size), batch_size_(batch_size), rng_(seed) {
  if (batch_size == 0) throw ConfigError("batch size must be >= 1");
  if (dataset_size == 0) throw ConfigError("sequential sampler: empty dataset");
  reshuffle();
}

void SequentialSampler::reshuffle() {
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  shuffle_indices(order_, rng_);
  cursor_ = 0;
}

std::vector<std::size_t> SequentialSampler::next_batch() {
  std::vector<std::size_t> batch;
  batch.reserve(batch_size_);
  while (batch.size() < batch_size_) {
    if (cursor_ == order_.size()) reshuffle();
    batch.push_back(order_[cursor_++]);
  }
  return batch;
}

}  // namespace fringe
