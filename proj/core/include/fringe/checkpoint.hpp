#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "fringe/tensor.hpp"

namespace fringe {

class EncoderModel;

enum class Stage { pretrained, finetuned };

const char* to_string(Stage s);
Stage stage_from_string(const std::string& s);

/// Self-describing training snapshot.
///
/// File layout: the 6 bytes "FCKP1\n", a little-endian uint64 header length,
/// a JSON header (stage, epoch, step, rng_state, config, metadata and a tensor
/// index of name/shape/offset), then every tensor as little-endian float64 in
/// index order. Serialization is canonical, so save -> load -> save is
/// byte-identical.
struct Checkpoint {
  Stage stage = Stage::pretrained;
  std::uint64_t epoch = 0;
  std::uint64_t step = 0;
  std::string rng_state;
  /// Encoder configuration the tensors belong to.
  nlohmann::json config = nlohmann::json::object();
  /// Free-form training metadata: train state, stage config, transcripts.
  nlohmann::json metadata = nlohmann::json::object();
  std::map<std::string, Tensor> tensors;
};

std::string serialize_checkpoint(const Checkpoint& ckpt);
Checkpoint deserialize_checkpoint(const std::string& bytes);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
/// Missing file -> IoError; bad magic or unsupported version -> ValidationError.
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Snapshot of every model parameter and buffer.
Checkpoint make_checkpoint(EncoderModel& model, Stage stage);
/// Rebuilds the model described by ckpt.config and loads its tensors.
EncoderModel model_from_checkpoint(const Checkpoint& ckpt);
/// Copies ckpt tensors into a model with the same layout; every tensor must be present.
void load_model_tensors(EncoderModel& model, const Checkpoint& ckpt);
/// Copies only backbone tensors (pretrained-weight import).
void import_backbone_weights(EncoderModel& model, const Checkpoint& source);

/// Throws StageError unless ckpt.stage == expected, with a remediation hint.
void require_stage(const Checkpoint& ckpt, Stage expected);

}  // namespace fringe
