#include "fringe/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "fringe/config.hpp"
#include "fringe/error.hpp"
#include "fringe/model.hpp"

namespace fringe {

namespace {

constexpr char kMagic[6] = {'F', 'C', 'K', 'P', '1', '\n'};
constexpr int kFormatVersion = 1;

static_assert(std::endian::native == std::endian::little, "checkpoints are little-endian");

}  // namespace

const char* to_string(Stage s) {
  return s == Stage::pretrained ? "pretrained" : "finetuned";
}

Stage stage_from_string(const std::string& s) {
  if (s == "pretrained") return Stage::pretrained;
  if (s == "finetuned") return Stage::finetuned;
  throw ValidationError("unknown checkpoint stage '" + s + "'");
}

std::string serialize_checkpoint(const Checkpoint& ckpt) {
  nlohmann::json header;
  header["format_version"] = kFormatVersion;
  header["stage"] = to_string(ckpt.stage);
  header["epoch"] = ckpt.epoch;
  header["step"] = ckpt.step;
  header["rng_state"] = ckpt.rng_state;
  header["config"] = ckpt.config;
  header["metadata"] = ckpt.metadata;
  auto index = nlohmann::json::array();
  std::uint64_t offset = 0;
  for (const auto& [name, t] : ckpt.tensors) {
    index.push_back({{"name", name}, {"shape", t.shape()}, {"offset", offset}});
    offset += t.size();
  }
  header["tensors"] = index;
  const std::string text = header.dump();

  std::string out;
  out.append(kMagic, sizeof kMagic);
  const std::uint64_t len = text.size();
  out.append(reinterpret_cast<const char*>(&len), sizeof len);
  out += text;
  for (const auto& [name, t] : ckpt.tensors) {
    out.append(reinterpret_cast<const char*>(t.data()), t.size() * sizeof(double));
  }
  return out;
}

Checkpoint deserialize_checkpoint(const std::string& bytes) {
  if (bytes.size() < sizeof kMagic + sizeof(std::uint64_t) || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw ValidationError("not a checkpoint: missing FCKP1 magic");
  }
  std::uint64_t len = 0;
  std::memcpy(&len, bytes.data() + sizeof kMagic, sizeof len);
  const std::size_t header_start = sizeof kMagic + sizeof len;
  if (len > bytes.size() - header_start) throw ValidationError("checkpoint header truncated");

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.substr(header_start, len));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("checkpoint header is not valid JSON: ") + e.what());
  }
  try {
    if (header.at("format_version").get<int>() != kFormatVersion) {
      throw ValidationError("unsupported checkpoint version " + header.at("format_version").dump());
    }
    Checkpoint ckpt;
    ckpt.stage = stage_from_string(header.at("stage").get<std::string>());
    ckpt.epoch = header.at("epoch").get<std::uint64_t>();
    ckpt.step = header.at("step").get<std::uint64_t>();
    ckpt.rng_state = header.at("rng_state").get<std::string>();
    ckpt.config = header.at("config");
    ckpt.metadata = header.at("metadata");

    const std::size_t payload = header_start + len;
    const std::size_t available = (bytes.size() - payload) / sizeof(double);
    std::size_t expected = 0;
    for (const auto& entry : header.at("tensors")) {
      const auto shape = entry.at("shape").get<std::vector<int>>();
      const auto offset = entry.at("offset").get<std::uint64_t>();
      Tensor t(shape);
      if (offset != expected || offset + t.size() > available) {
        throw ValidationError("checkpoint tensor index is inconsistent");
      }
      std::memcpy(t.data(), bytes.data() + payload + offset * sizeof(double), t.size() * sizeof(double));
      expected += t.size();
      ckpt.tensors.emplace(entry.at("name").get<std::string>(), std::move(t));
    }
    if (payload + expected * sizeof(double) != bytes.size()) throw ValidationError("checkpoint has trailing bytes");
    return ckpt;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed checkpoint header: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write checkpoint " + path.string());
  const std::string bytes = serialize_checkpoint(ckpt);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize_checkpoint(buf.str());
}

Checkpoint make_checkpoint(EncoderModel& model, Stage stage) {
  Checkpoint ckpt;
  ckpt.stage = stage;
  ckpt.config = encoder_config_to_json(model.config());
  for (const auto& [name, t] : model.named_tensors()) ckpt.tensors.emplace(name, *t);
  return ckpt;
}

EncoderModel model_from_checkpoint(const Checkpoint& ckpt) {
  EncoderConfig cfg = encoder_config_from_json(ckpt.config);
  // The tensors below replace whatever the import would have provided.
  cfg.init = WeightInit::random;
  cfg.import_path.clear();
  EncoderModel model(cfg);
  load_model_tensors(model, ckpt);
  return model;
}

void load_model_tensors(EncoderModel& model, const Checkpoint& ckpt) {
  for (auto& [name, t] : model.named_tensors()) {
    const auto it = ckpt.tensors.find(name);
    if (it == ckpt.tensors.end()) throw ValidationError("checkpoint lacks tensor " + name);
    if (it->second.shape() != t->shape()) {
      throw ValidationError("tensor " + name + " has shape " + it->second.shape_string() + ", model expects " +
                            t->shape_string());
    }
    *t = it->second;
  }
}

void import_backbone_weights(EncoderModel& model, const Checkpoint& source) {
  for (auto& [name, t] : model.named_tensors()) {
    if (name.rfind("backbone.", 0) != 0) continue;
    const auto it = source.tensors.find(name);
    if (it == source.tensors.end()) throw ValidationError("imported weights lack tensor " + name);
    if (it->second.shape() != t->shape()) throw ValidationError("imported tensor " + name + " has the wrong shape");
    *t = it->second;
  }
}

void require_stage(const Checkpoint& ckpt, Stage expected) {
  if (ckpt.stage == expected) return;
  std::string hint = expected == Stage::pretrained ? "run `fringe pretrain` first and pass its checkpoint"
                                                   : "run `fringe finetune` on a pretrained checkpoint first";
  throw StageError(std::string("checkpoint stage is '") + to_string(ckpt.stage) + "', expected '" +
                   to_string(expected) + "'; " + hint);
}

}  // namespace fringe
