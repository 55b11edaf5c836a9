#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "fringe/augment.hpp"
#include "fringe/contrast.hpp"
#include "fringe/model.hpp"
#include "fringe/optimizer.hpp"
#include "fringe/patch.hpp"
#include "fringe/train.hpp"

namespace fringe {

// Strict JSON mappings. Readers accept partial objects (missing keys keep
// their defaults) but reject unknown keys and wrong types with ValidationError.

nlohmann::json encoder_config_to_json(const EncoderConfig& c, bool with_seed = true);
EncoderConfig encoder_config_from_json(const nlohmann::json& j, bool with_seed = true);
nlohmann::json augment_config_to_json(const AugmentationConfig& c);
AugmentationConfig augment_config_from_json(const nlohmann::json& j);
nlohmann::json loss_config_to_json(const LossConfig& c);
LossConfig loss_config_from_json(const nlohmann::json& j);
nlohmann::json adam_config_to_json(const AdamConfig& c);
AdamConfig adam_config_from_json(const nlohmann::json& j);
nlohmann::json pretrain_config_to_json(const PretrainConfig& c, bool with_seed = true);
PretrainConfig pretrain_config_from_json(const nlohmann::json& j, bool with_seed = true);
nlohmann::json finetune_config_to_json(const FinetuneConfig& c, bool with_seed = true);
FinetuneConfig finetune_config_from_json(const nlohmann::json& j, bool with_seed = true);

const char* to_string(ChannelMode m);
ChannelMode channel_mode_from_string(const std::string& s);

struct DataConfig {
  std::string manifest;  ///< relative to the work directory
  ChannelMode channels = ChannelMode::cyclic;
};

struct EvaluateConfig {
  bool write_cams = false;
  /// Class whose activation map is rendered; -1 means the predicted class.
  int cam_class = -1;
};

enum class Profile { desk, full };

/// Everything one command needs. A single top-level seed drives every stage,
/// so sections carry no seeds of their own.
struct RunConfig {
  DataConfig data;
  AugmentationConfig augment;
  EncoderConfig encoder;
  LossConfig loss;
  PretrainConfig pretrain;
  FinetuneConfig finetune;
  EvaluateConfig evaluate;
  Profile profile = Profile::desk;
  std::uint64_t seed = 0;

  /// Copies the top-level seed into the stage configs.
  RunConfig resolved() const;

  /// Checks every section, cross-section consistency and, under the desk
  /// profile, the CPU caps (side <= 64, pretrain epochs <= 50, fine-tune
  /// epochs <= 10, batch <= 256). Referenced files must exist under workdir.
  void validate(const std::filesystem::path& workdir) const;
};

nlohmann::json run_config_to_json(const RunConfig& c);
RunConfig run_config_from_json(const nlohmann::json& j);

RunConfig load_run_config(const std::filesystem::path& path);
void save_run_config(const RunConfig& c, const std::filesystem::path& path);

/// Sets "section.key" (or "seed"/"profile") in a config object. The value is
/// parsed as JSON when possible and otherwise taken as a string.
void apply_override(nlohmann::json& config, const std::string& dotted_key, const std::string& value);

}  // namespace fringe
