#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "fringe/rng.hpp"
#include "fringe/tensor.hpp"

namespace fringe {

/// train: batch statistics in normalization layers, running stats updated.
/// eval: running statistics, nothing updated.
enum class Mode { train, eval };

struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;

  Parameter() = default;
  Parameter(std::string n, Tensor v) : name(std::move(n)), value(std::move(v)), grad(value.shape()) {}
};

using NamedTensor = std::pair<std::string, Tensor*>;

/// A differentiable layer. forward() caches what backward() needs, so
/// backward() must follow the forward() whose gradient it computes.
/// Parameter gradients accumulate until zeroed by the optimizer.
class Layer {
 public:
  virtual ~Layer() = default;
  virtual Tensor forward(const Tensor& x, Mode mode) = 0;
  virtual Tensor backward(const Tensor& grad_out) = 0;
  virtual void collect_parameters(std::vector<Parameter*>& /*out*/) {}
  /// Non-trainable state saved with checkpoints (running statistics).
  virtual void collect_buffers(std::vector<NamedTensor>& /*out*/) {}
};

/// zeros: out-of-range taps read 0. replicate: they read the nearest edge pixel.
enum class PaddingMode { zeros, replicate };

class Conv2d final : public Layer {
 public:
  Conv2d(const std::string& name, int in_channels, int out_channels, int kernel, int stride, int padding, bool bias,
         Rng& init, PaddingMode padding_mode = PaddingMode::zeros);

  Tensor forward(const Tensor& x, Mode mode) override;
  Tensor backward(const Tensor& grad_out) override;
  void collect_parameters(std::vector<Parameter*>& out) override;

  int out_channels() const { return out_channels_; }

 private:
  /// Source row/column for a padded coordinate; -1 reads zero.
  int source_index(int i, int extent) const;

  int in_channels_, out_channels_, kernel_, stride_, padding_;
  PaddingMode padding_mode_;
  Parameter weight_;  // out x (in * k * k)
  std::unique_ptr<Parameter> bias_;
  std::vector<int> input_shape_;
  std::vector<RowMatrix> cols_;
};

class BatchNorm2d final : public Layer {
 public:
  BatchNorm2d(const std::string& name, int channels, double momentum = 0.1, double eps = 1e-5);

  Tensor forward(const Tensor& x, Mode mode) override;
  Tensor backward(const Tensor& grad_out) override;
  void collect_parameters(std::vector<Parameter*>& out) override;
  void collect_buffers(std::vector<NamedTensor>& out) override;

 private:
  int channels_;
  double momentum_, eps_;
  Parameter gamma_, beta_;
  std::string running_mean_name_, running_var_name_;
  Tensor running_mean_, running_var_;
  Mode last_mode_ = Mode::eval;
  Tensor xhat_;
  std::vector<double> inv_std_;
};

class Relu final : public Layer {
 public:
  Tensor forward(const Tensor& x, Mode mode) override;
  Tensor backward(const Tensor& grad_out) override;

 private:
  Tensor output_;
};

class MaxPool2d final : public Layer {
 public:
  MaxPool2d(int kernel, int stride, int padding) : kernel_(kernel), stride_(stride), padding_(padding) {}

  Tensor forward(const Tensor& x, Mode mode) override;
  Tensor backward(const Tensor& grad_out) override;

 private:
  int kernel_, stride_, padding_;
  std::vector<int> input_shape_;
  std::vector<std::size_t> argmax_;
};

/// y = x W^T + b on N x in batches.
class Linear final : public Layer {
 public:
  Linear(const std::string& name, int in_features, int out_features, bool bias, Rng& init);

  Tensor forward(const Tensor& x, Mode mode) override;
  Tensor backward(const Tensor& grad_out) override;
  void collect_parameters(std::vector<Parameter*>& out) override;

  int in_features() const { return in_features_; }
  int out_features() const { return out_features_; }
  Parameter& weight() { return weight_; }
  const Parameter& weight() const { return weight_; }
  Parameter* bias() { return bias_.get(); }
  const Parameter* bias() const { return bias_.get(); }

 private:
  int in_features_, out_features_;
  Parameter weight_;  // out x in
  std::unique_ptr<Parameter> bias_;
  Tensor input_;
};

class Sequential final : public Layer {
 public:
  Sequential() = default;

  template <typename L, typename... Args>
  L& add(Args&&... args) {
    auto layer = std::make_unique<L>(std::forward<Args>(args)...);
    L& ref = *layer;
    layers_.push_back(std::move(layer));
    return ref;
  }
  void push(std::unique_ptr<Layer> layer) { layers_.push_back(std::move(layer)); }
  bool empty() const { return layers_.empty(); }

  Tensor forward(const Tensor& x, Mode mode) override;
  Tensor backward(const Tensor& grad_out) override;
  void collect_parameters(std::vector<Parameter*>& out) override;
  void collect_buffers(std::vector<NamedTensor>& out) override;

 private:
  std::vector<std::unique_ptr<Layer>> layers_;
};

/// relu(main(x) + shortcut(x)); an empty shortcut is the identity.
class ResidualBlock final : public Layer {
 public:
  ResidualBlock(Sequential main, Sequential shortcut) : main_(std::move(main)), shortcut_(std::move(shortcut)) {}

  Tensor forward(const Tensor& x, Mode mode) override;
  Tensor backward(const Tensor& grad_out) override;
  void collect_parameters(std::vector<Parameter*>& out) override;
  void collect_buffers(std::vector<NamedTensor>& out) override;

 private:
  Sequential main_;
  Sequential shortcut_;
  Relu relu_;
};

/// N x C x H x W -> N x C spatial mean.
Tensor global_average_pool(const Tensor& maps);
Tensor global_average_pool_backward(const Tensor& grad, const std::vector<int>& maps_shape);

}  // namespace fringe
