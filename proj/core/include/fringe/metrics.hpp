#pragma once

#include <cstdint>

#include <nlohmann/json.hpp>

namespace fringe {

/// Binary confusion counts; class 1 (deformation) is the positive class.
struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + fp + tn + fn; }
  std::uint64_t positives() const { return tp + fn; }
  std::uint64_t negatives() const { return tn + fp; }

  void add(int label, int prediction);

  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct Metrics {
  double accuracy = 0.0;
  double precision = 0.0;  ///< 1 when nothing was predicted positive
  double recall = 0.0;     ///< 1 when there are no positives
  double f1 = 0.0;         ///< 0 when precision + recall = 0

  friend bool operator==(const Metrics&, const Metrics&) = default;
};

/// Accuracy of an empty tally is defined as 0.
Metrics compute_metrics(const ConfusionCounts& c);

nlohmann::json to_json(const ConfusionCounts& c);
ConfusionCounts counts_from_json(const nlohmann::json& j);

}  // namespace fringe
