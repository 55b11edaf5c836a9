#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fringe/layers.hpp"

namespace fringe {

enum class BackboneKind { resnet18, resnet34, resnet50, tiny_conv };

const char* to_string(BackboneKind k);
BackboneKind backbone_from_string(const std::string& name);

/// Convolutional feature extractor organised in stages. The output of the
/// last stage is the final feature map stack that average pooling reduces to
/// the representation h and that class activation maps weight.
///
/// ResNets: stage 0 is the stem (7x7/2 conv, BN, ReLU, 3x3/2 max pool),
/// stages 1-4 are layer1-layer4. tiny-conv: 3x3 conv (edge-replicating
/// padding), BN and ReLU per stage, strides 2, 2, 1, 1, so a 32x32 input
/// ends in 8x8 maps.
class Backbone {
 public:
  static Backbone create(BackboneKind kind, int in_channels, std::span<const int> tiny_widths, Rng& init);

  Backbone(Backbone&&) = default;
  Backbone& operator=(Backbone&&) = default;

  BackboneKind kind() const { return kind_; }
  int in_channels() const { return in_channels_; }
  /// Channel count K of the final feature maps (= representation width).
  int feature_channels() const { return feature_channels_; }
  std::size_t stage_count() const { return stages_.size(); }

  Tensor forward(const Tensor& x, Mode mode);
  /// Back-propagates through stages [first_stage, stage_count) in reverse and
  /// returns the gradient w.r.t. the input of first_stage.
  Tensor backward(const Tensor& grad_maps, std::size_t first_stage = 0);

  void collect_parameters(std::vector<Parameter*>& out, std::size_t first_stage = 0);
  void collect_buffers(std::vector<NamedTensor>& out);

 private:
  Backbone() = default;

  BackboneKind kind_ = BackboneKind::tiny_conv;
  int in_channels_ = 0;
  int feature_channels_ = 0;
  std::vector<Sequential> stages_;
};

}  // namespace fringe
