#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fringe/backbone.hpp"
#include "fringe/patch.hpp"

namespace fringe {

enum class WeightInit { random, imported };

struct EncoderConfig {
  BackboneKind backbone = BackboneKind::tiny_conv;
  int input_side = 32;
  int input_channels = 3;
  std::vector<int> tiny_widths = {16, 32, 64, 64};
  /// Hidden width of the projection MLP; 0 means "same as the representation".
  int projection_hidden = 0;
  int projection_dim = 128;
  bool projection_bias = true;
  WeightInit init = WeightInit::random;
  /// Checkpoint whose backbone tensors seed the encoder when init == imported.
  std::string import_path;
  std::uint64_t seed = 0;

  /// D_h: post-pooling width of the backbone.
  int representation_dim() const;
  int resolved_projection_hidden() const {
    return projection_hidden > 0 ? projection_hidden : representation_dim();
  }
  void validate() const;
};

/// g(h) = W2 relu(W1 h + b1) + b2.
class ProjectionHead {
 public:
  ProjectionHead(int in_dim, int hidden_dim, int out_dim, bool bias, Rng& init);

  Tensor forward(const Tensor& h, Mode mode);
  Tensor backward(const Tensor& grad_z);
  void collect_parameters(std::vector<Parameter*>& out);

  int in_dim() const { return first_.in_features(); }
  int out_dim() const { return second_.out_features(); }
  Linear& first() { return first_; }
  Linear& second() { return second_; }

 private:
  Linear first_;
  Relu relu_;
  Linear second_;
};

/// Two-class linear classifier on h; rows of the weight are (class 0, class 1).
class ClassifierHead {
 public:
  ClassifierHead(int in_dim, Rng& init);

  Tensor forward(const Tensor& h, Mode mode);
  Tensor backward(const Tensor& grad_logits);
  void collect_parameters(std::vector<Parameter*>& out);

  int in_dim() const { return linear_.in_features(); }
  Linear& linear() { return linear_; }
  const Linear& linear() const { return linear_; }

 private:
  Linear linear_;
};

/// Backbone f, projection head g and classifier head. Not thread-safe:
/// every forward pass caches activations for a following backward pass.
class EncoderModel {
 public:
  explicit EncoderModel(EncoderConfig config);

  const EncoderConfig& config() const { return config_; }
  Backbone& backbone() { return backbone_; }
  ProjectionHead& projection() { return projection_; }
  ClassifierHead& classifier() { return classifier_; }

  /// N x C x S x S -> final feature maps N x K x s x s.
  Tensor feature_maps(const Tensor& batch, Mode mode);
  /// N x C x S x S -> N x D_h (feature maps, then global average pooling).
  Tensor encode(const Tensor& batch, Mode mode);
  /// Gradient of h back through pooling and backbone stages >= first_stage.
  void encode_backward(const Tensor& grad_h, std::size_t first_stage = 0);

  std::vector<Parameter*> backbone_parameters(std::size_t first_stage = 0);
  std::vector<Parameter*> projection_parameters();
  std::vector<Parameter*> classifier_parameters();
  /// Every parameter and buffer, in a stable order, for checkpointing.
  std::vector<NamedTensor> named_tensors();

 private:
  EncoderConfig config_;
  Rng init_rng_;
  Backbone backbone_;
  ProjectionHead projection_;
  ClassifierHead classifier_;
  std::vector<int> maps_shape_;
};

/// Stacks channel planes into an N x C x S x S batch.
Tensor make_batch(std::span<const ChannelStack> views);
Tensor make_batch(std::span<const InterferogramPatch* const> patches);

/// Inference-mode representation; validates the batch against the config.
Tensor encode(EncoderModel& model, const Tensor& batch);
/// Encodes rendered patches in chunks of at most chunk rows.
Tensor encode_patches(EncoderModel& model, std::span<const InterferogramPatch* const> patches, std::size_t chunk = 64);

Tensor project(ProjectionHead& head, const Tensor& h);
Tensor classify(ClassifierHead& head, const Tensor& h);

/// argmax over (negative, positive) logits; ties go to label 0.
int predict_label(double negative_logit, double positive_logit);

/// FNV-1a over the bit patterns of the parameter values, in order.
std::uint64_t parameter_checksum(const std::vector<Parameter*>& params);

}  // namespace fringe
