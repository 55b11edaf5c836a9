#include "fringe/model.hpp"

#include <cstring>

#include "fringe/checkpoint.hpp"
#include "fringe/error.hpp"

namespace fringe {

int EncoderConfig::representation_dim() const {
  switch (backbone) {
    case BackboneKind::resnet18:
    case BackboneKind::resnet34: return 512;
    case BackboneKind::resnet50: return 2048;
    case BackboneKind::tiny_conv: return tiny_widths.empty() ? 0 : tiny_widths.back();
  }
  return 0;
}

void EncoderConfig::validate() const {
  if (input_side < InterferogramPatch::kMinSide) throw ValidationError("encoder.input_side must be >= 8");
  if (input_channels != 1 && input_channels != 3) throw ValidationError("encoder.input_channels must be 1 or 3");
  if (backbone == BackboneKind::tiny_conv) {
    if (tiny_widths.size() != 4) throw ValidationError("encoder.tiny_widths needs 4 entries");
    for (int w : tiny_widths) {
      if (w < 1) throw ValidationError("encoder.tiny_widths must be positive");
    }
  }
  if (projection_hidden < 0) throw ValidationError("encoder.projection_hidden must be >= 0");
  if (projection_dim < 1) throw ValidationError("encoder.projection_dim must be >= 1");
  if (init == WeightInit::imported && import_path.empty()) {
    throw ValidationError("encoder.init = imported requires encoder.import_path");
  }
}

// -------------------------------------------------------- ProjectionHead

ProjectionHead::ProjectionHead(int in_dim, int hidden_dim, int out_dim, bool bias, Rng& init)
    : first_("projection.fc1", in_dim, hidden_dim, bias, init), second_("projection.fc2", hidden_dim, out_dim, bias, init) {}

Tensor ProjectionHead::forward(const Tensor& h, Mode mode) {
  return second_.forward(relu_.forward(first_.forward(h, mode), mode), mode);
}

Tensor ProjectionHead::backward(const Tensor& grad_z) {
  return first_.backward(relu_.backward(second_.backward(grad_z)));
}

void ProjectionHead::collect_parameters(std::vector<Parameter*>& out) {
  first_.collect_parameters(out);
  second_.collect_parameters(out);
}

// -------------------------------------------------------- ClassifierHead

ClassifierHead::ClassifierHead(int in_dim, Rng& init) : linear_("classifier.fc", in_dim, 2, true, init) {}

Tensor ClassifierHead::forward(const Tensor& h, Mode mode) {
  return linear_.forward(h, mode);
}

Tensor ClassifierHead::backward(const Tensor& grad_logits) {
  return linear_.backward(grad_logits);
}

void ClassifierHead::collect_parameters(std::vector<Parameter*>& out) {
  linear_.collect_parameters(out);
}

// ---------------------------------------------------------- EncoderModel

namespace {

EncoderConfig checked(EncoderConfig c) {
  c.validate();
  return c;
}

}  // namespace

EncoderModel::EncoderModel(EncoderConfig config)
    : config_(checked(std::move(config))),
      init_rng_(derive_seed(config_.seed, {label_key("init")})),
      backbone_(Backbone::create(config_.backbone, config_.input_channels, config_.tiny_widths, init_rng_)),
      projection_(config_.representation_dim(), config_.resolved_projection_hidden(), config_.projection_dim,
                  config_.projection_bias, init_rng_),
      classifier_(config_.representation_dim(), init_rng_) {
  if (config_.init == WeightInit::imported) import_backbone_weights(*this, load_checkpoint(config_.import_path));
}

Tensor EncoderModel::feature_maps(const Tensor& batch, Mode mode) {
  return backbone_.forward(batch, mode);
}

Tensor EncoderModel::encode(const Tensor& batch, Mode mode) {
  const Tensor maps = backbone_.forward(batch, mode);
  maps_shape_ = maps.shape();
  return global_average_pool(maps);
}

void EncoderModel::encode_backward(const Tensor& grad_h, std::size_t first_stage) {
  if (maps_shape_.empty()) throw ValidationError("encode_backward called before encode");
  backbone_.backward(global_average_pool_backward(grad_h, maps_shape_), first_stage);
}

std::vector<Parameter*> EncoderModel::backbone_parameters(std::size_t first_stage) {
  std::vector<Parameter*> out;
  backbone_.collect_parameters(out, first_stage);
  return out;
}

std::vector<Parameter*> EncoderModel::projection_parameters() {
  std::vector<Parameter*> out;
  projection_.collect_parameters(out);
  return out;
}

std::vector<Parameter*> EncoderModel::classifier_parameters() {
  std::vector<Parameter*> out;
  classifier_.collect_parameters(out);
  return out;
}

std::vector<NamedTensor> EncoderModel::named_tensors() {
  std::vector<NamedTensor> out;
  std::vector<Parameter*> params = backbone_parameters();
  for (auto* p : projection_parameters()) params.push_back(p);
  for (auto* p : classifier_parameters()) params.push_back(p);
  for (auto* p : params) out.emplace_back(p->name, &p->value);
  backbone_.collect_buffers(out);
  return out;
}

// --------------------------------------------------------- free helpers

Tensor make_batch(std::span<const ChannelStack> views) {
  if (views.empty()) throw ValidationError("empty batch");
  const int c = views.front().channels;
  const int s = views.front().side;
  Tensor batch({static_cast<int>(views.size()), c, s, s});
  std::size_t off = 0;
  for (const auto& v : views) {
    if (v.channels != c || v.side != s) throw ValidationError("batch views differ in shape");
    for (float f : v.values) batch[off++] = f;
  }
  return batch;
}

Tensor make_batch(std::span<const InterferogramPatch* const> patches) {
  std::vector<ChannelStack> views;
  views.reserve(patches.size());
  for (const auto* p : patches) {
    if (!p->rendered()) throw ValidationError("patch " + p->meta().source_id + " is not rendered");
    views.push_back(p->channels());
  }
  return make_batch(views);
}

Tensor encode(EncoderModel& model, const Tensor& batch) {
  const auto& cfg = model.config();
  if (batch.rank() != 4 || batch.dim(1) != cfg.input_channels || batch.dim(2) != cfg.input_side ||
      batch.dim(3) != cfg.input_side) {
    throw ValidationError("encode: expected N x " + std::to_string(cfg.input_channels) + " x " +
                          std::to_string(cfg.input_side) + " x " + std::to_string(cfg.input_side) + ", got " +
                          batch.shape_string());
  }
  return model.encode(batch, Mode::eval);
}

Tensor encode_patches(EncoderModel& model, std::span<const InterferogramPatch* const> patches, std::size_t chunk) {
  const int d = model.config().representation_dim();
  Tensor h({static_cast<int>(patches.size()), d});
  for (std::size_t start = 0; start < patches.size(); start += chunk) {
    const std::size_t count = std::min(chunk, patches.size() - start);
    const Tensor part = encode(model, make_batch(patches.subspan(start, count)));
    std::copy(part.data(), part.data() + part.size(), h.data() + start * static_cast<std::size_t>(d));
  }
  return h;
}

Tensor project(ProjectionHead& head, const Tensor& h) {
  if (h.rank() != 2 || h.dim(1) != head.in_dim()) {
    throw ValidationError("project: expected N x " + std::to_string(head.in_dim()) + ", got " + h.shape_string());
  }
  return head.forward(h, Mode::eval);
}

Tensor classify(ClassifierHead& head, const Tensor& h) {
  if (h.rank() != 2 || h.dim(1) != head.in_dim()) {
    throw ValidationError("classify: expected N x " + std::to_string(head.in_dim()) + ", got " + h.shape_string());
  }
  return head.forward(h, Mode::eval);
}

int predict_label(double negative_logit, double positive_logit) {
  return positive_logit > negative_logit ? 1 : 0;
}

std::uint64_t parameter_checksum(const std::vector<Parameter*>& params) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const auto* p : params) {
    for (double v : p->value.values()) {
      std::uint64_t bits = 0;
      std::memcpy(&bits, &v, sizeof bits);
      for (int i = 0; i < 8; ++i) {
        h ^= (bits >> (8 * i)) & 0xFFu;
        h *= 0x100000001B3ULL;
      }
    }
  }
  return h;
}

}  // namespace fringe
