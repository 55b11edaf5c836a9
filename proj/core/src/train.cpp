#include "fringe/train.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "fringe/config.hpp"
#include "fringe/error.hpp"
#include "fringe/rng.hpp"
#include "fringe/sampler.hpp"

namespace fringe {

using nlohmann::json;

void PretrainConfig::validate() const {
  if (batch_size < 2) throw ConfigError("pretrain batch size must be >= 2 (a contrastive batch needs a negative)");
  optimizer.validate();
}

void FinetuneConfig::validate() const {
  if (batch_size < 1) throw ConfigError("fine-tune batch size must be >= 1");
  optimizer.validate();
}

const char* to_string(Unfreeze u) {
  return u == Unfreeze::head_only ? "head_only" : "head_plus_late_blocks";
}

Unfreeze unfreeze_from_string(const std::string& s) {
  if (s == "head_only") return Unfreeze::head_only;
  if (s == "head_plus_late_blocks") return Unfreeze::head_plus_late_blocks;
  throw ValidationError("unknown unfreeze mode '" + s + "'");
}

const char* to_string(SamplerKind k) {
  return k == SamplerKind::balanced ? "balanced" : "sequential";
}

SamplerKind sampler_from_string(const std::string& s) {
  if (s == "balanced") return SamplerKind::balanced;
  if (s == "sequential") return SamplerKind::sequential;
  throw ValidationError("unknown sampler '" + s + "'");
}

json TrainState::to_json() const {
  return {{"version", kVersion},
          {"stage", fringe::to_string(stage)},
          {"epoch", epoch},
          {"step_in_epoch", step_in_epoch},
          {"global_step", global_step},
          {"seed", seed},
          {"completed", completed},
          {"best_metric", std::isnan(best_metric) ? json(nullptr) : json(best_metric)},
          {"best_epoch", best_epoch},
          {"snapshot_path", snapshot_path},
          {"epoch_metric_sum", epoch_metric_sum},
          {"epoch_metric_count", epoch_metric_count}};
}

TrainState TrainState::from_json(const json& j) {
  try {
    if (j.at("version").get<int>() != kVersion) {
      throw ValidationError("unsupported train state version " + j.at("version").dump());
    }
    TrainState s;
    s.stage = stage_from_string(j.at("stage").get<std::string>());
    s.epoch = j.at("epoch").get<std::size_t>();
    s.step_in_epoch = j.at("step_in_epoch").get<std::size_t>();
    s.global_step = j.at("global_step").get<std::uint64_t>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.completed = j.at("completed").get<bool>();
    const json& best = j.at("best_metric");
    s.best_metric = best.is_null() ? std::numeric_limits<double>::quiet_NaN() : best.get<double>();
    s.best_epoch = j.at("best_epoch").get<std::size_t>();
    s.snapshot_path = j.at("snapshot_path").get<std::string>();
    s.epoch_metric_sum = j.at("epoch_metric_sum").get<double>();
    s.epoch_metric_count = j.at("epoch_metric_count").get<std::size_t>();
    return s;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed train state: ") + e.what());
  }
}

TrainState train_state_of(const Checkpoint& checkpoint) {
  if (!checkpoint.metadata.contains("train_state")) {
    throw ValidationError("checkpoint carries no train state");
  }
  return TrainState::from_json(checkpoint.metadata.at("train_state"));
}

double cross_entropy(const Tensor& logits, std::span<const int> labels, Tensor* grad) {
  if (logits.rank() != 2 || logits.dim(1) != 2 || static_cast<std::size_t>(logits.dim(0)) != labels.size()) {
    throw ValidationError("cross_entropy expects n x 2 logits and n labels");
  }
  const std::size_t n = labels.size();
  if (grad) *grad = Tensor(logits.shape());
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = logits[2 * i], b = logits[2 * i + 1];
    const double m = std::max(a, b);
    const double lse = m + std::log(std::exp(a - m) + std::exp(b - m));
    const int y = labels[i];
    total += lse - (y == 1 ? b : a);
    if (grad) {
      const double p1 = std::exp(b - lse);
      (*grad)[2 * i] = ((1.0 - p1) - (y == 0 ? 1.0 : 0.0)) / static_cast<double>(n);
      (*grad)[2 * i + 1] = (p1 - (y == 1 ? 1.0 : 0.0)) / static_cast<double>(n);
    }
  }
  return total / static_cast<double>(n);
}

namespace {

std::size_t ceil_div(std::size_t a, std::size_t b) {
  return (a + b - 1) / b;
}

std::vector<std::size_t> pretrain_order(std::size_t n, std::uint64_t seed, std::size_t epoch) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(derive_seed(seed, {label_key("pretrain-order"), epoch}));
  shuffle_indices(order, rng);
  return order;
}

std::uint64_t pretrain_aug_seed(std::uint64_t seed, std::size_t epoch, std::size_t batch) {
  return derive_seed(seed, {label_key("pretrain-augment"), epoch, batch});
}

std::uint64_t finetune_sampler_seed(std::uint64_t seed, std::size_t epoch) {
  return derive_seed(seed, {label_key("finetune-sampler"), epoch});
}

Checkpoint snapshot(EncoderModel& model, const Adam& adam, const TrainState& state, json stage_metadata,
                    std::uint64_t next_seed) {
  Checkpoint ckpt = make_checkpoint(model, state.stage);
  for (auto& [name, t] : adam.state()) ckpt.tensors.emplace(name, std::move(t));
  ckpt.epoch = state.epoch;
  ckpt.step = state.global_step;
  ckpt.rng_state = rng_state_to_string(Rng(next_seed));
  ckpt.metadata = std::move(stage_metadata);
  ckpt.metadata["train_state"] = state.to_json();
  return ckpt;
}

/// Closes an epoch: updates the best-metric tracker; higher_is_better selects the direction.
bool finish_epoch(TrainState& state, bool higher_is_better) {
  bool best = false;
  if (state.epoch_metric_count > 0) {
    const double metric = state.epoch_metric_sum / static_cast<double>(state.epoch_metric_count);
    best = std::isnan(state.best_metric) || (higher_is_better ? metric > state.best_metric : metric < state.best_metric);
    if (best) {
      state.best_metric = metric;
      state.best_epoch = state.epoch;
    }
  }
  ++state.epoch;
  state.step_in_epoch = 0;
  state.epoch_metric_sum = 0.0;
  state.epoch_metric_count = 0;
  return best;
}

struct PretrainRun {
  EncoderModel& model;
  Adam& adam;
  std::span<const InterferogramPatch> data;
  const AugmentationConfig& augment;
  const LossConfig& loss;
  const PretrainConfig& config;
  const TrainHooks& hooks;
  json metadata;

  TrainResult run(TrainState state) {
    TrainResult result;
    const std::size_t n = data.size();
    const std::size_t per_batch = config.batch_size;
    const std::size_t batches = ceil_div(n, per_batch);
    bool interrupted = false;

    while (state.epoch < config.epochs && !interrupted) {
      const auto order = pretrain_order(n, state.seed, state.epoch);
      for (std::size_t b = state.step_in_epoch; b < batches; ++b) {
        if (hooks.stop_after_steps != 0 && state.global_step >= hooks.stop_after_steps) {
          interrupted = true;
          break;
        }
        const std::size_t begin = b * per_batch;
        const std::size_t end = std::min(begin + per_batch, n);
        state.step_in_epoch = b + 1;
        if (end - begin < 2) continue;

        Rng rng(pretrain_aug_seed(state.seed, state.epoch, b));
        std::vector<ChannelStack> views;
        views.reserve(2 * (end - begin));
        for (std::size_t k = begin; k < end; ++k) {
          AugmentedPair pair = make_pair(data[order[k]], augment, rng, order[k]);
          views.push_back(std::move(pair.view_i));
          views.push_back(std::move(pair.view_j));
        }
        const Tensor batch = make_batch(views);

        adam.zero_grad();
        const Tensor h = model.encode(batch, Mode::train);
        const Tensor z = model.projection().forward(h, Mode::train);
        RowMatrix grad_z;
        const BatchLossReport report = ntxent_batch(RowMatrix(z.matrix()), loss, &grad_z);
        Tensor gz(z.shape());
        gz.matrix() = grad_z;
        model.encode_backward(model.projection().backward(gz), 0);
        adam.step();

        ++state.global_step;
        state.epoch_metric_sum += report.total;
        ++state.epoch_metric_count;
        LogRecord rec{"pretrain",          state.epoch, state.global_step, report.total, config.optimizer.learning_rate,
                      report.batch_size, state.seed};
        if (hooks.on_step) hooks.on_step(rec);
        result.log.push_back(std::move(rec));
      }
      if (interrupted) break;
      const bool best = finish_epoch(state, false);
      if (state.epoch == config.epochs) state.completed = true;
      if (hooks.on_epoch) {
        hooks.on_epoch(snapshot(model, adam, state, metadata, pretrain_aug_seed(state.seed, state.epoch, 0)), state,
                       best);
      }
    }
    if (state.epoch >= config.epochs) state.completed = true;
    result.checkpoint =
        snapshot(model, adam, state, metadata, pretrain_aug_seed(state.seed, state.epoch, state.step_in_epoch));
    result.state = state;
    return result;
  }
};

json pretrain_metadata(const AugmentationConfig& augment, const LossConfig& loss, const PretrainConfig& config) {
  return {{"stage_kind", "pretrain"},
          {"augment", augment_config_to_json(augment)},
          {"loss", loss_config_to_json(loss)},
          {"pretrain", pretrain_config_to_json(config)}};
}

std::vector<Parameter*> pretrain_parameters(EncoderModel& model) {
  auto params = model.backbone_parameters(0);
  const auto head = model.projection_parameters();
  params.insert(params.end(), head.begin(), head.end());
  return params;
}

std::size_t first_trainable_stage(EncoderModel& model, Unfreeze unfreeze) {
  const std::size_t stages = model.backbone().stage_count();
  return unfreeze == Unfreeze::head_only ? stages : (stages >= 2 ? stages - 2 : 0);
}

std::vector<Parameter*> finetune_parameters(EncoderModel& model, Unfreeze unfreeze) {
  auto params = model.classifier_parameters();
  if (unfreeze == Unfreeze::head_plus_late_blocks) {
    const auto late = model.backbone_parameters(first_trainable_stage(model, unfreeze));
    params.insert(params.end(), late.begin(), late.end());
  }
  return params;
}

std::unique_ptr<BatchSampler> make_sampler(SamplerKind kind, std::span<const Label> labels, std::size_t batch,
                                           std::uint64_t seed) {
  if (kind == SamplerKind::balanced) return std::make_unique<BalancedSampler>(labels, batch, seed);
  return std::make_unique<SequentialSampler>(labels.size(), batch, seed);
}

struct FinetuneRun {
  EncoderModel& model;
  Adam& adam;
  std::span<const LabeledPatch> data;
  const FinetuneConfig& config;
  const TrainHooks& hooks;
  json metadata;

  TrainResult run(TrainState state) {
    TrainResult result;
    const std::size_t n = data.size();
    const std::size_t batches = ceil_div(n, config.batch_size);
    const std::size_t first_stage = first_trainable_stage(model, config.unfreeze);
    const bool frozen_encoder = config.unfreeze == Unfreeze::head_only;

    std::vector<Label> labels(n);
    std::vector<const InterferogramPatch*> patches(n);
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = data[i].label;
      patches[i] = &data[i].patch;
    }
    // With a frozen encoder the representations never change, so compute them once.
    Tensor cached_h;
    if (frozen_encoder && config.epochs > state.epoch) cached_h = encode_patches(model, patches);

    bool interrupted = false;
    while (state.epoch < config.epochs && !interrupted) {
      auto sampler = make_sampler(config.sampler, labels, config.batch_size, finetune_sampler_seed(state.seed, state.epoch));
      sampler->skip(state.step_in_epoch);
      for (std::size_t b = state.step_in_epoch; b < batches; ++b) {
        if (hooks.stop_after_steps != 0 && state.global_step >= hooks.stop_after_steps) {
          interrupted = true;
          break;
        }
        const auto idx = sampler->next_batch();
        std::vector<int> y(idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) y[k] = to_int(labels[idx[k]]);

        Tensor h;
        if (frozen_encoder) {
          const int width = cached_h.dim(1);
          h = Tensor({static_cast<int>(idx.size()), width});
          for (std::size_t k = 0; k < idx.size(); ++k) {
            std::copy_n(cached_h.data() + idx[k] * static_cast<std::size_t>(width), width,
                        h.data() + k * static_cast<std::size_t>(width));
          }
        } else {
          std::vector<const InterferogramPatch*> chosen(idx.size());
          for (std::size_t k = 0; k < idx.size(); ++k) chosen[k] = patches[idx[k]];
          // Batch statistics stay frozen: the unfrozen stages train with BN in eval mode.
          h = model.encode(make_batch(chosen), Mode::eval);
        }

        adam.zero_grad();
        const Tensor logits = model.classifier().forward(h, Mode::train);
        Tensor grad;
        const double loss = cross_entropy(logits, y, &grad);
        const Tensor grad_h = model.classifier().backward(grad);
        if (!frozen_encoder) model.encode_backward(grad_h, first_stage);
        adam.step();

        std::size_t correct = 0;
        for (std::size_t k = 0; k < idx.size(); ++k) {
          correct += predict_label(logits[2 * k], logits[2 * k + 1]) == y[k] ? 1 : 0;
        }
        ++state.global_step;
        state.step_in_epoch = b + 1;
        state.epoch_metric_sum += static_cast<double>(correct) / static_cast<double>(idx.size());
        ++state.epoch_metric_count;
        LogRecord rec{"finetune", state.epoch, state.global_step, loss, config.optimizer.learning_rate,
                      idx.size(), state.seed};
        if (hooks.on_step) hooks.on_step(rec);
        result.log.push_back(std::move(rec));
      }
      if (interrupted) break;
      const bool best = finish_epoch(state, true);
      if (state.epoch == config.epochs) state.completed = true;
      if (hooks.on_epoch) {
        hooks.on_epoch(snapshot(model, adam, state, metadata, finetune_sampler_seed(state.seed, state.epoch)), state,
                       best);
      }
    }
    if (state.epoch >= config.epochs) state.completed = true;
    result.checkpoint = snapshot(model, adam, state, metadata, finetune_sampler_seed(state.seed, state.epoch));
    result.state = state;
    return result;
  }
};

json finetune_metadata(const FinetuneConfig& config, const json& pretrain_state) {
  return {{"stage_kind", "finetune"}, {"finetune", finetune_config_to_json(config)}, {"pretrain_state", pretrain_state}};
}

void check_labels_present(std::span<const LabeledPatch> data) {
  bool seen[2] = {false, false};
  for (const auto& p : data) seen[to_int(p.label)] = true;
  if (!seen[0] || !seen[1]) {
    throw ConfigError(std::string("fine-tuning needs both classes in the training split; class ") +
                      (seen[0] ? "1" : "0") + " is missing");
  }
}

}  // namespace

TrainResult pretrain(std::span<const InterferogramPatch> data, const EncoderConfig& encoder,
                     const AugmentationConfig& augment, const LossConfig& loss, const PretrainConfig& config,
                     const TrainHooks& hooks) {
  config.validate();
  loss.validate();
  augment.validate(encoder.input_side);
  if (data.empty()) throw ConfigError("pretraining needs a non-empty training split");

  EncoderModel model(encoder);
  Adam adam(pretrain_parameters(model), config.optimizer);
  TrainState state;
  state.stage = Stage::pretrained;
  state.seed = config.seed;
  PretrainRun run{model, adam, data, augment, loss, config, hooks, pretrain_metadata(augment, loss, config)};
  return run.run(state);
}

TrainResult resume_pretrain(const Checkpoint& checkpoint, std::span<const InterferogramPatch> data,
                            const PretrainConfig& config, const TrainHooks& hooks) {
  config.validate();
  const TrainState state = train_state_of(checkpoint);
  if (checkpoint.metadata.value("stage_kind", "") != "pretrain" || state.stage != Stage::pretrained) {
    throw StageError("checkpoint is not an in-progress pretraining run; resume it with a fine-tune config instead");
  }
  if (state.completed && state.epoch >= config.epochs) return {checkpoint, state, {}};
  if (data.empty()) throw ConfigError("pretraining needs a non-empty training split");

  const AugmentationConfig augment = augment_config_from_json(checkpoint.metadata.at("augment"));
  const LossConfig loss = loss_config_from_json(checkpoint.metadata.at("loss"));
  EncoderModel model = model_from_checkpoint(checkpoint);
  Adam adam(pretrain_parameters(model), config.optimizer);
  adam.load_state(checkpoint.tensors, state.global_step);
  TrainState next = state;
  next.completed = false;
  PretrainRun run{model, adam, data, augment, loss, config, hooks, pretrain_metadata(augment, loss, config)};
  return run.run(next);
}

TrainResult finetune(const Checkpoint& pretrained, std::span<const LabeledPatch> data, const FinetuneConfig& config,
                     const TrainHooks& hooks) {
  config.validate();
  require_stage(pretrained, Stage::pretrained);
  json pretrain_state = nullptr;
  if (pretrained.metadata.contains("train_state")) {
    const TrainState ps = train_state_of(pretrained);
    if (!ps.completed) throw StageError("pretraining has not finished; run `fringe resume` on this checkpoint first");
    pretrain_state = ps.to_json();
  }
  if (data.empty()) throw ConfigError("fine-tuning needs a non-empty training split");
  check_labels_present(data);

  EncoderModel model = model_from_checkpoint(pretrained);
  Adam adam(finetune_parameters(model, config.unfreeze), config.optimizer);
  TrainState state;
  state.stage = Stage::finetuned;
  state.seed = config.seed;
  FinetuneRun run{model, adam, data, config, hooks, finetune_metadata(config, pretrain_state)};
  return run.run(state);
}

TrainResult resume_finetune(const Checkpoint& checkpoint, std::span<const LabeledPatch> data,
                            const FinetuneConfig& config, const TrainHooks& hooks) {
  config.validate();
  const TrainState state = train_state_of(checkpoint);
  if (checkpoint.metadata.value("stage_kind", "") != "finetune" || state.stage != Stage::finetuned) {
    throw StageError("checkpoint is not an in-progress fine-tuning run; resume it with a pretrain config instead");
  }
  if (state.completed && state.epoch >= config.epochs) return {checkpoint, state, {}};
  if (data.empty()) throw ConfigError("fine-tuning needs a non-empty training split");
  check_labels_present(data);

  EncoderModel model = model_from_checkpoint(checkpoint);
  Adam adam(finetune_parameters(model, config.unfreeze), config.optimizer);
  adam.load_state(checkpoint.tensors, state.global_step);
  TrainState next = state;
  next.completed = false;
  FinetuneRun run{model, adam, data, config, hooks,
                  finetune_metadata(config, checkpoint.metadata.value("pretrain_state", json(nullptr)))};
  return run.run(next);
}

}  // namespace fringe
