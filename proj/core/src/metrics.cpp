#include "fringe/metrics.hpp"

#include "fringe/error.hpp"

namespace fringe {

void ConfusionCounts::add(int label, int prediction) {
  if ((label != 0 && label != 1) || (prediction != 0 && prediction != 1)) {
    throw ValidationError("confusion counts take labels and predictions in {0, 1}");
  }
  if (label == 1) {
    ++(prediction == 1 ? tp : fn);
  } else {
    ++(prediction == 1 ? fp : tn);
  }
}

Metrics compute_metrics(const ConfusionCounts& c) {
  Metrics m;
  const auto d = [](std::uint64_t v) { return static_cast<double>(v); };
  m.accuracy = c.total() == 0 ? 0.0 : d(c.tp + c.tn) / d(c.total());
  m.precision = c.tp + c.fp == 0 ? 1.0 : d(c.tp) / d(c.tp + c.fp);
  m.recall = c.tp + c.fn == 0 ? 1.0 : d(c.tp) / d(c.tp + c.fn);
  m.f1 = m.precision + m.recall == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

nlohmann::json to_json(const ConfusionCounts& c) {
  return {{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}};
}

ConfusionCounts counts_from_json(const nlohmann::json& j) {
  try {
    return {j.at("tp").get<std::uint64_t>(), j.at("fp").get<std::uint64_t>(), j.at("tn").get<std::uint64_t>(),
            j.at("fn").get<std::uint64_t>()};
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed confusion counts: ") + e.what());
  }
}

}  // namespace fringe
