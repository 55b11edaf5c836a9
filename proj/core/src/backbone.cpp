#include "fringe/backbone.hpp"

#include <array>
#include <memory>

#include "fringe/error.hpp"

namespace fringe {

namespace {

std::string stage_name(std::size_t i) {
  return "backbone.stage" + std::to_string(i);
}

std::unique_ptr<Layer> basic_block(const std::string& name, int in, int out, int stride, Rng& init) {
  Sequential main;
  main.add<Conv2d>(name + ".conv1", in, out, 3, stride, 1, false, init);
  main.add<BatchNorm2d>(name + ".bn1", out);
  main.add<Relu>();
  main.add<Conv2d>(name + ".conv2", out, out, 3, 1, 1, false, init);
  main.add<BatchNorm2d>(name + ".bn2", out);
  Sequential shortcut;
  if (stride != 1 || in != out) {
    shortcut.add<Conv2d>(name + ".down.conv", in, out, 1, stride, 0, false, init);
    shortcut.add<BatchNorm2d>(name + ".down.bn", out);
  }
  return std::make_unique<ResidualBlock>(std::move(main), std::move(shortcut));
}

std::unique_ptr<Layer> bottleneck_block(const std::string& name, int in, int width, int stride, Rng& init) {
  const int out = width * 4;
  Sequential main;
  main.add<Conv2d>(name + ".conv1", in, width, 1, 1, 0, false, init);
  main.add<BatchNorm2d>(name + ".bn1", width);
  main.add<Relu>();
  main.add<Conv2d>(name + ".conv2", width, width, 3, stride, 1, false, init);
  main.add<BatchNorm2d>(name + ".bn2", width);
  main.add<Relu>();
  main.add<Conv2d>(name + ".conv3", width, out, 1, 1, 0, false, init);
  main.add<BatchNorm2d>(name + ".bn3", out);
  Sequential shortcut;
  if (stride != 1 || in != out) {
    shortcut.add<Conv2d>(name + ".down.conv", in, out, 1, stride, 0, false, init);
    shortcut.add<BatchNorm2d>(name + ".down.bn", out);
  }
  return std::make_unique<ResidualBlock>(std::move(main), std::move(shortcut));
}

}  // namespace

const char* to_string(BackboneKind k) {
  switch (k) {
    case BackboneKind::resnet18: return "resnet18";
    case BackboneKind::resnet34: return "resnet34";
    case BackboneKind::resnet50: return "resnet50";
    case BackboneKind::tiny_conv: return "tiny-conv";
  }
  return "?";
}

BackboneKind backbone_from_string(const std::string& name) {
  for (auto k : {BackboneKind::resnet18, BackboneKind::resnet34, BackboneKind::resnet50, BackboneKind::tiny_conv}) {
    if (name == to_string(k)) return k;
  }
  throw ValidationError("unknown backbone '" + name + "' (resnet18|resnet34|resnet50|tiny-conv)");
}

Backbone Backbone::create(BackboneKind kind, int in_channels, std::span<const int> tiny_widths, Rng& init) {
  if (in_channels < 1) throw ValidationError("backbone needs at least one input channel");
  Backbone b;
  b.kind_ = kind;
  b.in_channels_ = in_channels;

  if (kind == BackboneKind::tiny_conv) {
    if (tiny_widths.size() != 4) throw ValidationError("tiny-conv needs exactly 4 stage widths");
    constexpr std::array<int, 4> strides = {2, 2, 1, 1};
    int in = in_channels;
    for (std::size_t i = 0; i < 4; ++i) {
      if (tiny_widths[i] < 1) throw ValidationError("tiny-conv widths must be positive");
      Sequential stage;
      stage.add<Conv2d>(stage_name(i) + ".conv", in, tiny_widths[i], 3, strides[i], 1, false, init, PaddingMode::replicate);
      stage.add<BatchNorm2d>(stage_name(i) + ".bn", tiny_widths[i]);
      stage.add<Relu>();
      b.stages_.push_back(std::move(stage));
      in = tiny_widths[i];
    }
    b.feature_channels_ = in;
    return b;
  }

  Sequential stem;
  stem.add<Conv2d>(stage_name(0) + ".conv", in_channels, 64, 7, 2, 3, false, init);
  stem.add<BatchNorm2d>(stage_name(0) + ".bn", 64);
  stem.add<Relu>();
  stem.add<MaxPool2d>(3, 2, 1);
  b.stages_.push_back(std::move(stem));

  std::array<int, 4> blocks{};
  bool bottleneck = false;
  switch (kind) {
    case BackboneKind::resnet18: blocks = {2, 2, 2, 2}; break;
    case BackboneKind::resnet34: blocks = {3, 4, 6, 3}; break;
    case BackboneKind::resnet50:
      blocks = {3, 4, 6, 3};
      bottleneck = true;
      break;
    case BackboneKind::tiny_conv: break;
  }
  constexpr std::array<int, 4> widths = {64, 128, 256, 512};
  int in = 64;
  for (std::size_t s = 0; s < 4; ++s) {
    Sequential stage;
    for (int k = 0; k < blocks[s]; ++k) {
      const int stride = (s > 0 && k == 0) ? 2 : 1;
      const std::string name = stage_name(s + 1) + ".block" + std::to_string(k);
      if (bottleneck) {
        stage.push(bottleneck_block(name, in, widths[s], stride, init));
        in = widths[s] * 4;
      } else {
        stage.push(basic_block(name, in, widths[s], stride, init));
        in = widths[s];
      }
    }
    b.stages_.push_back(std::move(stage));
  }
  b.feature_channels_ = in;
  return b;
}

Tensor Backbone::forward(const Tensor& x, Mode mode) {
  if (x.rank() != 4 || x.dim(1) != in_channels_) {
    throw ValidationError("backbone expects N x " + std::to_string(in_channels_) + " x S x S, got " +
                          x.shape_string());
  }
  Tensor y = x;
  for (auto& stage : stages_) y = stage.forward(y, mode);
  return y;
}

Tensor Backbone::backward(const Tensor& grad_maps, std::size_t first_stage) {
  Tensor g = grad_maps;
  for (std::size_t i = stages_.size(); i-- > first_stage;) g = stages_[i].backward(g);
  return g;
}

void Backbone::collect_parameters(std::vector<Parameter*>& out, std::size_t first_stage) {
  for (std::size_t i = first_stage; i < stages_.size(); ++i) stages_[i].collect_parameters(out);
}

void Backbone::collect_buffers(std::vector<NamedTensor>& out) {
  for (auto& stage : stages_) stage.collect_buffers(out);
}

}  // namespace fringe
