#include "fringe/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "fringe/error.hpp"

namespace fringe {

using nlohmann::json;

namespace {

/// Reads fields of one JSON object and rejects keys nobody asked for.
class Reader {
 public:
  Reader(const json& j, std::string section) : j_(j), section_(std::move(section)) {
    if (!j_.is_object()) throw ValidationError("config section '" + section_ + "' must be an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception&) {
      throw ValidationError("config key '" + where(key) + "' has the wrong type: " + it->dump());
    }
  }

  template <typename T>
  void get_optional(const char* key, std::optional<T>& out) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) return;
    if (it->is_null()) {
      out.reset();
      return;
    }
    T v{};
    get(key, v);
    out = v;
  }

  /// Sub-object, or an empty object when absent.
  const json& object(const char* key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? empty() : *it;
  }

  template <typename Enum>
  void get_enum(const char* key, Enum& out, Enum (*parse)(const std::string&)) {
    std::string s;
    get(key, s);
    if (j_.contains(key)) out = parse(s);
  }

  std::string where(const char* key) const { return section_.empty() ? key : section_ + "." + key; }

  /// Throws ValidationError on the first unknown key.
  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.contains(k)) throw ValidationError("unknown config key '" + where(k.c_str()) + "'");
    }
  }

 private:
  static const json& empty() {
    static const json e = json::object();
    return e;
  }

  const json& j_;
  std::string section_;
  std::set<std::string> seen_;
};

void check_non_negative_int(long long v, const std::string& what) {
  if (v < 0) throw ValidationError(what + " must be >= 0");
}

json toggle_to_json(const TransformToggle& t) {
  return {{"enabled", t.enabled}, {"probability", t.probability}};
}

void read_toggle(Reader& r, const char* key, TransformToggle& t, const std::string& section) {
  const json& j = r.object(key);
  Reader tr(j, section + "." + key);
  tr.get("enabled", t.enabled);
  tr.get("probability", t.probability);
  tr.finish();
}

constexpr TransformKind kAllKinds[] = {TransformKind::hflip,
                                       TransformKind::vflip,
                                       TransformKind::elastic,
                                       TransformKind::blur,
                                       TransformKind::multiplicative_noise,
                                       TransformKind::gaussian_noise,
                                       TransformKind::cutout};

}  // namespace

const char* to_string(ChannelMode m) {
  return m == ChannelMode::cyclic ? "cyclic" : "phase_only";
}

ChannelMode channel_mode_from_string(const std::string& s) {
  if (s == "cyclic") return ChannelMode::cyclic;
  if (s == "phase_only") return ChannelMode::phase_only;
  throw ValidationError("unknown channel mode '" + s + "' (expected cyclic or phase_only)");
}

json encoder_config_to_json(const EncoderConfig& c, bool with_seed) {
  json j = {{"backbone", to_string(c.backbone)},
            {"input_side", c.input_side},
            {"input_channels", c.input_channels},
            {"tiny_widths", c.tiny_widths},
            {"projection_hidden", c.projection_hidden},
            {"projection_dim", c.projection_dim},
            {"projection_bias", c.projection_bias},
            {"init", c.init == WeightInit::random ? "random" : "imported"},
            {"import_path", c.import_path}};
  if (with_seed) j["seed"] = c.seed;
  return j;
}

EncoderConfig encoder_config_from_json(const json& j, bool with_seed) {
  EncoderConfig c;
  Reader r(j, "encoder");
  r.get_enum("backbone", c.backbone, &backbone_from_string);
  r.get("input_side", c.input_side);
  r.get("input_channels", c.input_channels);
  r.get("tiny_widths", c.tiny_widths);
  r.get("projection_hidden", c.projection_hidden);
  r.get("projection_dim", c.projection_dim);
  r.get("projection_bias", c.projection_bias);
  std::string init = "random";
  r.get("init", init);
  if (init == "random") {
    c.init = WeightInit::random;
  } else if (init == "imported") {
    c.init = WeightInit::imported;
  } else {
    throw ValidationError("encoder.init must be 'random' or 'imported', got '" + init + "'");
  }
  r.get("import_path", c.import_path);
  if (with_seed) r.get("seed", c.seed);
  r.finish();
  return c;
}

json augment_config_to_json(const AugmentationConfig& c) {
  json j = json::object();
  for (const TransformKind k : kAllKinds) j[to_string(k)] = toggle_to_json(c.toggle(k));
  j["cutout_hole"] = c.cutout_hole ? json(*c.cutout_hole) : json(nullptr);
  j["multiplicative_low"] = c.multiplicative_low;
  j["multiplicative_high"] = c.multiplicative_high;
  j["noise_sigma"] = c.noise_sigma;
  j["blur_kernel"] = c.blur_kernel;
  j["blur_sigma_min"] = c.blur_sigma_min;
  j["blur_sigma_max"] = c.blur_sigma_max;
  j["elastic_alpha"] = c.elastic_alpha ? json(*c.elastic_alpha) : json(nullptr);
  j["elastic_sigma"] = c.elastic_sigma ? json(*c.elastic_sigma) : json(nullptr);
  return j;
}

AugmentationConfig augment_config_from_json(const json& j) {
  AugmentationConfig c;
  Reader r(j, "augment");
  for (const TransformKind k : kAllKinds) read_toggle(r, to_string(k), c.toggle(k), "augment");
  r.get_optional("cutout_hole", c.cutout_hole);
  r.get("multiplicative_low", c.multiplicative_low);
  r.get("multiplicative_high", c.multiplicative_high);
  r.get("noise_sigma", c.noise_sigma);
  r.get("blur_kernel", c.blur_kernel);
  r.get("blur_sigma_min", c.blur_sigma_min);
  r.get("blur_sigma_max", c.blur_sigma_max);
  r.get_optional("elastic_alpha", c.elastic_alpha);
  r.get_optional("elastic_sigma", c.elastic_sigma);
  r.finish();
  return c;
}

json loss_config_to_json(const LossConfig& c) {
  return {{"temperature", c.temperature}, {"eps", c.eps}};
}

LossConfig loss_config_from_json(const json& j) {
  LossConfig c;
  Reader r(j, "loss");
  r.get("temperature", c.temperature);
  r.get("eps", c.eps);
  r.finish();
  return c;
}

json adam_config_to_json(const AdamConfig& c) {
  return {{"learning_rate", c.learning_rate},
          {"beta1", c.beta1},
          {"beta2", c.beta2},
          {"epsilon", c.epsilon},
          {"weight_decay", c.weight_decay}};
}

AdamConfig adam_config_from_json(const json& j) {
  AdamConfig c;
  Reader r(j, "optimizer");
  r.get("learning_rate", c.learning_rate);
  r.get("beta1", c.beta1);
  r.get("beta2", c.beta2);
  r.get("epsilon", c.epsilon);
  r.get("weight_decay", c.weight_decay);
  r.finish();
  return c;
}

json pretrain_config_to_json(const PretrainConfig& c, bool with_seed) {
  json j = {{"epochs", c.epochs},
            {"batch_size", c.batch_size},
            {"learning_rate", c.optimizer.learning_rate},
            {"optimizer", adam_config_to_json(c.optimizer)}};
  j["optimizer"].erase("learning_rate");
  if (with_seed) j["seed"] = c.seed;
  return j;
}

PretrainConfig pretrain_config_from_json(const json& j, bool with_seed) {
  PretrainConfig c;
  Reader r(j, "pretrain");
  long long epochs = static_cast<long long>(c.epochs), batch = static_cast<long long>(c.batch_size);
  r.get("epochs", epochs);
  r.get("batch_size", batch);
  check_non_negative_int(epochs, "pretrain.epochs");
  check_non_negative_int(batch, "pretrain.batch_size");
  c.epochs = static_cast<std::size_t>(epochs);
  c.batch_size = static_cast<std::size_t>(batch);
  c.optimizer = adam_config_from_json(r.object("optimizer"));
  r.get("learning_rate", c.optimizer.learning_rate);
  if (with_seed) r.get("seed", c.seed);
  r.finish();
  return c;
}

json finetune_config_to_json(const FinetuneConfig& c, bool with_seed) {
  json j = {{"epochs", c.epochs},
            {"batch_size", c.batch_size},
            {"learning_rate", c.optimizer.learning_rate},
            {"optimizer", adam_config_to_json(c.optimizer)},
            {"unfreeze", to_string(c.unfreeze)},
            {"sampler", to_string(c.sampler)}};
  j["optimizer"].erase("learning_rate");
  if (with_seed) j["seed"] = c.seed;
  return j;
}

FinetuneConfig finetune_config_from_json(const json& j, bool with_seed) {
  FinetuneConfig c;
  Reader r(j, "finetune");
  long long epochs = static_cast<long long>(c.epochs), batch = static_cast<long long>(c.batch_size);
  r.get("epochs", epochs);
  r.get("batch_size", batch);
  check_non_negative_int(epochs, "finetune.epochs");
  check_non_negative_int(batch, "finetune.batch_size");
  c.epochs = static_cast<std::size_t>(epochs);
  c.batch_size = static_cast<std::size_t>(batch);
  const double default_lr = c.optimizer.learning_rate;
  c.optimizer = adam_config_from_json(r.object("optimizer"));
  c.optimizer.learning_rate = default_lr;
  r.get("learning_rate", c.optimizer.learning_rate);
  r.get_enum("unfreeze", c.unfreeze, &unfreeze_from_string);
  r.get_enum("sampler", c.sampler, &sampler_from_string);
  if (with_seed) r.get("seed", c.seed);
  r.finish();
  return c;
}

RunConfig RunConfig::resolved() const {
  RunConfig out = *this;
  out.encoder.seed = seed;
  out.pretrain.seed = seed;
  out.finetune.seed = seed;
  return out;
}

void RunConfig::validate(const std::filesystem::path& workdir) const {
  augment.validate(encoder.input_side);
  encoder.validate();
  loss.validate();
  pretrain.optimizer.validate();
  finetune.optimizer.validate();
  if (pretrain.batch_size < 2) throw ValidationError("pretrain.batch_size must be >= 2");
  if (finetune.batch_size < 1) throw ValidationError("finetune.batch_size must be >= 1");
  if (encoder.input_channels != channel_count(data.channels)) {
    throw ValidationError("encoder.input_channels must be " + std::to_string(channel_count(data.channels)) +
                          " for channel mode " + to_string(data.channels));
  }
  if (evaluate.cam_class < -1 || evaluate.cam_class > 1) {
    throw ValidationError("evaluate.cam_class must be -1, 0 or 1");
  }
  if (profile == Profile::desk) {
    if (encoder.input_side > 64) throw ValidationError("desk profile caps encoder.input_side at 64");
    if (pretrain.epochs > 50) throw ValidationError("desk profile caps pretrain.epochs at 50");
    if (finetune.epochs > 10) throw ValidationError("desk profile caps finetune.epochs at 10");
    if (pretrain.batch_size > 256 || finetune.batch_size > 256) {
      throw ValidationError("desk profile caps batch sizes at 256");
    }
  }
  if (!data.manifest.empty() && !std::filesystem::exists(workdir / data.manifest)) {
    throw ValidationError("data.manifest does not exist: " + (workdir / data.manifest).string());
  }
  if (encoder.init == WeightInit::imported && !std::filesystem::exists(workdir / encoder.import_path)) {
    throw ValidationError("encoder.import_path does not exist: " + (workdir / encoder.import_path).string());
  }
}

json run_config_to_json(const RunConfig& c) {
  return {{"profile", c.profile == Profile::desk ? "desk" : "full"},
          {"seed", c.seed},
          {"data", {{"manifest", c.data.manifest}, {"channels", to_string(c.data.channels)}}},
          {"augment", augment_config_to_json(c.augment)},
          {"encoder", encoder_config_to_json(c.encoder, false)},
          {"loss", loss_config_to_json(c.loss)},
          {"pretrain", pretrain_config_to_json(c.pretrain, false)},
          {"finetune", finetune_config_to_json(c.finetune, false)},
          {"evaluate", {{"write_cams", c.evaluate.write_cams}, {"cam_class", c.evaluate.cam_class}}}};
}

RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  Reader r(j, "");
  std::string profile = "desk";
  r.get("profile", profile);
  if (profile == "desk") {
    c.profile = Profile::desk;
  } else if (profile == "full") {
    c.profile = Profile::full;
  } else {
    throw ValidationError("profile must be 'desk' or 'full', got '" + profile + "'");
  }
  r.get("seed", c.seed);
  {
    Reader d(r.object("data"), "data");
    d.get("manifest", c.data.manifest);
    d.get_enum("channels", c.data.channels, &channel_mode_from_string);
    d.finish();
  }
  c.augment = augment_config_from_json(r.object("augment"));
  const json& enc = r.object("encoder");
  c.encoder = encoder_config_from_json(enc, false);
  if (!enc.contains("input_channels")) c.encoder.input_channels = channel_count(c.data.channels);
  c.loss = loss_config_from_json(r.object("loss"));
  c.pretrain = pretrain_config_from_json(r.object("pretrain"), false);
  c.finetune = finetune_config_from_json(r.object("finetune"), false);
  {
    Reader e(r.object("evaluate"), "evaluate");
    e.get("write_cams", c.evaluate.write_cams);
    e.get("cam_class", c.evaluate.cam_class);
    e.finish();
  }
  r.finish();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return run_config_from_json(j);
}

void save_run_config(const RunConfig& c, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write config " + path.string());
  out << run_config_to_json(c).dump(2) << '\n';
  if (!out) throw IoError("failed writing config " + path.string());
}

void apply_override(json& config, const std::string& dotted_key, const std::string& value) {
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::parse_error&) {
    parsed = value;
  }
  json* node = &config;
  std::stringstream ss(dotted_key);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) {
    if (part.empty()) throw ValidationError("malformed config key '" + dotted_key + "'");
    parts.push_back(part);
  }
  if (parts.empty()) throw ValidationError("empty config key");
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    json& next = (*node)[parts[i]];
    if (next.is_null()) next = json::object();
    if (!next.is_object()) throw ValidationError("config key '" + dotted_key + "' descends into a non-object");
    node = &next;
  }
  (*node)[parts.back()] = parsed;
}

}  // namespace fringe
