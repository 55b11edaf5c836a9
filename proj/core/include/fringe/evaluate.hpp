#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fringe/cam.hpp"
#include "fringe/checkpoint.hpp"
#include "fringe/metrics.hpp"
#include "fringe/model.hpp"

namespace fringe {

/// A test patch with an identifier used in reports and CAM file names.
struct EvalSample {
  std::string id;
  const InterferogramPatch* patch = nullptr;
  Label label = Label::non_deformation;
};

struct SampleRecord {
  std::string id;
  int label = 0;
  int prediction = 0;
  double positive_logit = 0.0;
  double negative_logit = 0.0;

  friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

struct EvaluationReport {
  ConfusionCounts counts;
  Metrics metrics;
  std::vector<SampleRecord> samples;

  /// Counts, metrics and the degenerate-denominator conventions.
  nlohmann::json header() const;

  friend bool operator==(const EvaluationReport&, const EvaluationReport&) = default;
};

/// Inference on every sample with the argmax rule (ties -> class 0).
EvaluationReport evaluate_model(EncoderModel& model, std::span<const EvalSample> samples);

/// Throws StageError unless the checkpoint is fine-tuned and ConfigError for an empty test split.
EvaluationReport evaluate(const Checkpoint& checkpoint, std::span<const EvalSample> samples);

/// One JSON header line followed by one JSON line per sample.
void write_report(const EvaluationReport& report, const std::filesystem::path& path);
EvaluationReport read_report(const std::filesystem::path& path);

struct SequenceItem {
  std::string id;
  std::optional<long long> order;
  const InterferogramPatch* patch = nullptr;
};

struct SequenceStep {
  std::string id;
  long long order = 0;
  int prediction = 0;
  double positive_logit = 0.0;
  std::optional<int> expert;
  CamResult cam;  ///< for the predicted class
};

struct SequenceReport {
  std::vector<SequenceStep> steps;  ///< chronological
  /// Present only when expert labels were supplied.
  std::optional<double> agreement;
  /// 1-based timestep of the first positive prediction; only reported with expert labels.
  std::optional<std::size_t> first_alarm;

  nlohmann::json to_json() const;
};

/// Chronological monitoring: sorts by order key and classifies each step.
/// expert_labels, when given, is aligned with items (before sorting).
/// Throws ValidationError when an item has no order key.
SequenceReport evaluate_sequence(const Checkpoint& checkpoint, std::span<const SequenceItem> items,
                                 const std::optional<std::vector<Label>>& expert_labels = std::nullopt);
SequenceReport evaluate_sequence(EncoderModel& model, std::span<const SequenceItem> items,
                                 const std::optional<std::vector<Label>>& expert_labels = std::nullopt);

}  // namespace fringe
