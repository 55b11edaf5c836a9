#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fringe/augment.hpp"
#include "fringe/checkpoint.hpp"
#include "fringe/contrast.hpp"
#include "fringe/model.hpp"
#include "fringe/optimizer.hpp"
#include "fringe/training_log.hpp"

namespace fringe {

struct PretrainConfig {
  std::size_t epochs = 10;
  std::size_t batch_size = 16;  ///< N source patches, 2N views
  AdamConfig optimizer;
  std::uint64_t seed = 0;

  /// Throws ConfigError for N < 2.
  void validate() const;
};

enum class Unfreeze { head_only, head_plus_late_blocks };
enum class SamplerKind { balanced, sequential };

const char* to_string(Unfreeze u);
Unfreeze unfreeze_from_string(const std::string& s);
const char* to_string(SamplerKind k);
SamplerKind sampler_from_string(const std::string& s);

struct FinetuneConfig {
  std::size_t epochs = 3;
  std::size_t batch_size = 16;
  AdamConfig optimizer{.learning_rate = 0.005};
  Unfreeze unfreeze = Unfreeze::head_only;
  /// The sequential sampler exists as the no-oversampling control.
  SamplerKind sampler = SamplerKind::balanced;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Position inside a training stage; stored in checkpoint metadata.
struct TrainState {
  static constexpr int kVersion = 1;

  Stage stage = Stage::pretrained;
  std::size_t epoch = 0;          ///< epoch in progress (== epochs once completed)
  std::size_t step_in_epoch = 0;  ///< optimizer steps already taken in that epoch
  std::uint64_t global_step = 0;
  std::uint64_t seed = 0;
  bool completed = false;
  /// Pretraining: lowest epoch-mean loss. Fine-tuning: highest epoch training accuracy.
  double best_metric = std::numeric_limits<double>::quiet_NaN();
  std::size_t best_epoch = 0;
  /// Where the caller stored the latest snapshot, if anywhere.
  std::string snapshot_path;
  /// Running sum and count of the per-step metric within the current epoch.
  double epoch_metric_sum = 0.0;
  std::size_t epoch_metric_count = 0;

  nlohmann::json to_json() const;
  /// Throws ValidationError on an unknown version or malformed record.
  static TrainState from_json(const nlohmann::json& j);
};

struct TrainHooks {
  std::function<void(const LogRecord&)> on_step;
  /// Called after every completed epoch; best is true when the epoch improved best_metric.
  std::function<void(const Checkpoint&, const TrainState&, bool best)> on_epoch;
  /// Stop (with a resumable checkpoint) once this many global steps are done; 0 = no limit.
  std::uint64_t stop_after_steps = 0;
};

struct TrainResult {
  Checkpoint checkpoint;
  TrainState state;
  std::vector<LogRecord> log;
};

/// Contrastive pretraining of backbone + projection head on unlabeled patches.
/// Each epoch visits the data in a seeded random order, ceil(n / N) batches;
/// a trailing batch with fewer than 2 patches is skipped.
/// Throws ConfigError for an empty dataset or N < 2.
TrainResult pretrain(std::span<const InterferogramPatch> data, const EncoderConfig& encoder,
                     const AugmentationConfig& augment, const LossConfig& loss, const PretrainConfig& config,
                     const TrainHooks& hooks = {});

/// Linear-classifier fine-tuning on top of a pretrained encoder with
/// cross-entropy over the two logits; one epoch is ceil(n / batch) batches.
/// Throws StageError unless the checkpoint is a finished pretraining one and
/// ConfigError when a class is missing.
TrainResult finetune(const Checkpoint& pretrained, std::span<const LabeledPatch> data, const FinetuneConfig& config,
                     const TrainHooks& hooks = {});

/// Continues an interrupted pretraining stage from its checkpoint.
/// Throws StageError when the checkpoint belongs to another stage.
TrainResult resume_pretrain(const Checkpoint& checkpoint, std::span<const InterferogramPatch> data,
                            const PretrainConfig& config, const TrainHooks& hooks = {});
TrainResult resume_finetune(const Checkpoint& checkpoint, std::span<const LabeledPatch> data,
                            const FinetuneConfig& config, const TrainHooks& hooks = {});

/// Reads the TrainState stored in a checkpoint written by this module.
TrainState train_state_of(const Checkpoint& checkpoint);

/// Mean two-class cross-entropy of logits (n x 2) against labels; grad (optional) receives dL/dlogits.
double cross_entropy(const Tensor& logits, std::span<const int> labels, Tensor* grad = nullptr);

}  // namespace fringe
