#include "fringe/layers.hpp"

#include <cmath>
#include <limits>

#include "fringe/error.hpp"

namespace fringe {

namespace {

void require_rank4(const Tensor& x, int channels, const char* who) {
  if (x.rank() != 4 || x.dim(1) != channels) {
    throw ValidationError(std::string(who) + ": expected N x " + std::to_string(channels) + " x H x W, got " +
                          x.shape_string());
  }
}

}  // namespace

// ---------------------------------------------------------------- Conv2d

Conv2d::Conv2d(const std::string& name, int in_channels, int out_channels, int kernel, int stride, int padding,
               bool bias, Rng& init, PaddingMode padding_mode)
    : in_channels_(in_channels),
      out_channels_(out_channels),
      kernel_(kernel),
      stride_(stride),
      padding_(padding),
      padding_mode_(padding_mode),
      weight_(name + ".weight", Tensor({out_channels, in_channels * kernel * kernel})) {
  const double stddev = std::sqrt(2.0 / (in_channels * kernel * kernel));
  for (auto& w : weight_.value.values()) w = stddev * standard_normal(init);
  if (bias) bias_ = std::make_unique<Parameter>(name + ".bias", Tensor({out_channels}));
}

Tensor Conv2d::forward(const Tensor& x, Mode /*mode*/) {
  require_rank4(x, in_channels_, "conv2d");
  const int n = x.dim(0), h = x.dim(2), w = x.dim(3);
  const int ho = (h + 2 * padding_ - kernel_) / stride_ + 1;
  const int wo = (w + 2 * padding_ - kernel_) / stride_ + 1;
  if (ho <= 0 || wo <= 0) throw ValidationError("conv2d: input " + x.shape_string() + " too small for kernel");
  input_shape_ = x.shape();

  const int patch = in_channels_ * kernel_ * kernel_;
  const int out_area = ho * wo;
  cols_.assign(static_cast<std::size_t>(n), RowMatrix());
  Tensor y({n, out_channels_, ho, wo});
  const ConstMatrixMap weight(weight_.value.data(), out_channels_, patch);

  for (int s = 0; s < n; ++s) {
    RowMatrix& col = cols_[static_cast<std::size_t>(s)];
    col.setZero(patch, out_area);
    const double* xs = x.data() + static_cast<std::size_t>(s) * in_channels_ * h * w;
    for (int c = 0; c < in_channels_; ++c) {
      for (int ky = 0; ky < kernel_; ++ky) {
        for (int kx = 0; kx < kernel_; ++kx) {
          double* row = col.data() + static_cast<std::size_t>((c * kernel_ + ky) * kernel_ + kx) * out_area;
          for (int oy = 0; oy < ho; ++oy) {
            const int iy = source_index(oy * stride_ - padding_ + ky, h);
            if (iy < 0) continue;
            const double* src = xs + (static_cast<std::size_t>(c) * h + iy) * w;
            for (int ox = 0; ox < wo; ++ox) {
              const int ix = source_index(ox * stride_ - padding_ + kx, w);
              if (ix >= 0) row[oy * wo + ox] = src[ix];
            }
          }
        }
      }
    }
    MatrixMap out(y.data() + static_cast<std::size_t>(s) * out_channels_ * out_area, out_channels_, out_area);
    out.noalias() = weight * col;
    if (bias_) {
      for (int o = 0; o < out_channels_; ++o) out.row(o).array() += bias_->value[static_cast<std::size_t>(o)];
    }
  }
  return y;
}

Tensor Conv2d::backward(const Tensor& grad_out) {
  const int n = input_shape_.at(0), h = input_shape_.at(2), w = input_shape_.at(3);
  const int ho = grad_out.dim(2), wo = grad_out.dim(3);
  const int patch = in_channels_ * kernel_ * kernel_;
  const int out_area = ho * wo;
  const ConstMatrixMap weight(weight_.value.data(), out_channels_, patch);
  MatrixMap dweight(weight_.grad.data(), out_channels_, patch);

  Tensor dx(input_shape_);
  RowMatrix dcol;
  for (int s = 0; s < n; ++s) {
    const ConstMatrixMap gy(grad_out.data() + static_cast<std::size_t>(s) * out_channels_ * out_area, out_channels_,
                            out_area);
    const RowMatrix& col = cols_[static_cast<std::size_t>(s)];
    dweight.noalias() += gy * col.transpose();
    if (bias_) {
      for (int o = 0; o < out_channels_; ++o) bias_->grad[static_cast<std::size_t>(o)] += gy.row(o).sum();
    }
    dcol.noalias() = weight.transpose() * gy;
    double* dxs = dx.data() + static_cast<std::size_t>(s) * in_channels_ * h * w;
    for (int c = 0; c < in_channels_; ++c) {
      for (int ky = 0; ky < kernel_; ++ky) {
        for (int kx = 0; kx < kernel_; ++kx) {
          const double* row = dcol.data() + static_cast<std::size_t>((c * kernel_ + ky) * kernel_ + kx) * out_area;
          for (int oy = 0; oy < ho; ++oy) {
            const int iy = source_index(oy * stride_ - padding_ + ky, h);
            if (iy < 0) continue;
            double* dst = dxs + (static_cast<std::size_t>(c) * h + iy) * w;
            for (int ox = 0; ox < wo; ++ox) {
              const int ix = source_index(ox * stride_ - padding_ + kx, w);
              if (ix >= 0) dst[ix] += row[oy * wo + ox];
            }
          }
        }
      }
    }
  }
  return dx;
}

int Conv2d::source_index(int i, int extent) const {
  if (i >= 0 && i < extent) return i;
  if (padding_mode_ == PaddingMode::zeros) return -1;
  return i < 0 ? 0 : extent - 1;
}

void Conv2d::collect_parameters(std::vector<Parameter*>& out) {
  out.push_back(&weight_);
  if (bias_) out.push_back(bias_.get());
}

// ----------------------------------------------------------- BatchNorm2d

BatchNorm2d::BatchNorm2d(const std::string& name, int channels, double momentum, double eps)
    : channels_(channels),
      momentum_(momentum),
      eps_(eps),
      gamma_(name + ".gamma", Tensor({channels}, 1.0)),
      beta_(name + ".beta", Tensor({channels}, 0.0)),
      running_mean_name_(name + ".running_mean"),
      running_var_name_(name + ".running_var"),
      running_mean_({channels}, 0.0),
      running_var_({channels}, 1.0) {}

Tensor BatchNorm2d::forward(const Tensor& x, Mode mode) {
  require_rank4(x, channels_, "batchnorm2d");
  const int n = x.dim(0);
  const std::size_t area = static_cast<std::size_t>(x.dim(2)) * x.dim(3);
  const double count = static_cast<double>(n) * static_cast<double>(area);
  last_mode_ = mode;
  xhat_ = Tensor(x.shape());
  inv_std_.assign(static_cast<std::size_t>(channels_), 0.0);
  Tensor y(x.shape());

  for (int c = 0; c < channels_; ++c) {
    double mean = 0.0;
    double var = 0.0;
    if (mode == Mode::train) {
      for (int s = 0; s < n; ++s) {
        const double* p = x.data() + (static_cast<std::size_t>(s) * channels_ + c) * area;
        for (std::size_t i = 0; i < area; ++i) mean += p[i];
      }
      mean /= count;
      for (int s = 0; s < n; ++s) {
        const double* p = x.data() + (static_cast<std::size_t>(s) * channels_ + c) * area;
        for (std::size_t i = 0; i < area; ++i) var += (p[i] - mean) * (p[i] - mean);
      }
      const double unbiased = count > 1.0 ? var / (count - 1.0) : 0.0;
      var /= count;
      running_mean_[static_cast<std::size_t>(c)] =
          (1.0 - momentum_) * running_mean_[static_cast<std::size_t>(c)] + momentum_ * mean;
      running_var_[static_cast<std::size_t>(c)] =
          (1.0 - momentum_) * running_var_[static_cast<std::size_t>(c)] + momentum_ * unbiased;
    } else {
      mean = running_mean_[static_cast<std::size_t>(c)];
      var = running_var_[static_cast<std::size_t>(c)];
    }
    const double inv = 1.0 / std::sqrt(var + eps_);
    inv_std_[static_cast<std::size_t>(c)] = inv;
    const double g = gamma_.value[static_cast<std::size_t>(c)];
    const double b = beta_.value[static_cast<std::size_t>(c)];
    for (int s = 0; s < n; ++s) {
      const std::size_t off = (static_cast<std::size_t>(s) * channels_ + c) * area;
      for (std::size_t i = 0; i < area; ++i) {
        const double xh = (x[off + i] - mean) * inv;
        xhat_[off + i] = xh;
        y[off + i] = g * xh + b;
      }
    }
  }
  return y;
}

Tensor BatchNorm2d::backward(const Tensor& grad_out) {
  const int n = grad_out.dim(0);
  const std::size_t area = static_cast<std::size_t>(grad_out.dim(2)) * grad_out.dim(3);
  const double count = static_cast<double>(n) * static_cast<double>(area);
  Tensor dx(grad_out.shape());
  for (int c = 0; c < channels_; ++c) {
    double sum_dy = 0.0;
    double sum_dy_xhat = 0.0;
    for (int s = 0; s < n; ++s) {
      const std::size_t off = (static_cast<std::size_t>(s) * channels_ + c) * area;
      for (std::size_t i = 0; i < area; ++i) {
        sum_dy += grad_out[off + i];
        sum_dy_xhat += grad_out[off + i] * xhat_[off + i];
      }
    }
    gamma_.grad[static_cast<std::size_t>(c)] += sum_dy_xhat;
    beta_.grad[static_cast<std::size_t>(c)] += sum_dy;
    const double g = gamma_.value[static_cast<std::size_t>(c)];
    const double inv = inv_std_[static_cast<std::size_t>(c)];
    for (int s = 0; s < n; ++s) {
      const std::size_t off = (static_cast<std::size_t>(s) * channels_ + c) * area;
      for (std::size_t i = 0; i < area; ++i) {
        if (last_mode_ == Mode::train) {
          dx[off + i] = g * inv * (grad_out[off + i] - sum_dy / count - xhat_[off + i] * sum_dy_xhat / count);
        } else {
          dx[off + i] = g * inv * grad_out[off + i];
        }
      }
    }
  }
  return dx;
}

void BatchNorm2d::collect_parameters(std::vector<Parameter*>& out) {
  out.push_back(&gamma_);
  out.push_back(&beta_);
}

void BatchNorm2d::collect_buffers(std::vector<NamedTensor>& out) {
  out.emplace_back(running_mean_name_, &running_mean_);
  out.emplace_back(running_var_name_, &running_var_);
}

// ------------------------------------------------------------------ Relu

Tensor Relu::forward(const Tensor& x, Mode /*mode*/) {
  output_ = x;
  for (auto& v : output_.values()) v = v > 0.0 ? v : 0.0;
  return output_;
}

Tensor Relu::backward(const Tensor& grad_out) {
  Tensor dx = grad_out;
  for (std::size_t i = 0; i < dx.size(); ++i) {
    if (!(output_[i] > 0.0)) dx[i] = 0.0;
  }
  return dx;
}

// ------------------------------------------------------------- MaxPool2d

Tensor MaxPool2d::forward(const Tensor& x, Mode /*mode*/) {
  if (x.rank() != 4) throw ValidationError("maxpool2d: expected rank-4 input, got " + x.shape_string());
  const int n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
  const int ho = (h + 2 * padding_ - kernel_) / stride_ + 1;
  const int wo = (w + 2 * padding_ - kernel_) / stride_ + 1;
  if (ho <= 0 || wo <= 0) throw ValidationError("maxpool2d: input " + x.shape_string() + " too small");
  input_shape_ = x.shape();
  Tensor y({n, c, ho, wo});
  argmax_.assign(y.size(), 0);
  std::size_t o = 0;
  for (int p = 0; p < n * c; ++p) {
    const std::size_t base = static_cast<std::size_t>(p) * h * w;
    for (int oy = 0; oy < ho; ++oy) {
      for (int ox = 0; ox < wo; ++ox, ++o) {
        double best = -std::numeric_limits<double>::infinity();
        std::size_t best_i = base;
        for (int ky = 0; ky < kernel_; ++ky) {
          const int iy = oy * stride_ - padding_ + ky;
          if (iy < 0 || iy >= h) continue;
          for (int kx = 0; kx < kernel_; ++kx) {
            const int ix = ox * stride_ - padding_ + kx;
            if (ix < 0 || ix >= w) continue;
            const std::size_t i = base + static_cast<std::size_t>(iy) * w + ix;
            if (x[i] > best) {
              best = x[i];
              best_i = i;
            }
          }
        }
        y[o] = best;
        argmax_[o] = best_i;
      }
    }
  }
  return y;
}

Tensor MaxPool2d::backward(const Tensor& grad_out) {
  Tensor dx(input_shape_);
  for (std::size_t o = 0; o < grad_out.size(); ++o) dx[argmax_[o]] += grad_out[o];
  return dx;
}

// ---------------------------------------------------------------- Linear

Linear::Linear(const std::string& name, int in_features, int out_features, bool bias, Rng& init)
    : in_features_(in_features),
      out_features_(out_features),
      weight_(name + ".weight", Tensor({out_features, in_features})) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in_features));
  for (auto& w : weight_.value.values()) w = uniform(init, -bound, bound);
  if (bias) {
    bias_ = std::make_unique<Parameter>(name + ".bias", Tensor({out_features}));
    for (auto& b : bias_->value.values()) b = uniform(init, -bound, bound);
  }
}

Tensor Linear::forward(const Tensor& x, Mode /*mode*/) {
  if (x.rank() != 2 || x.dim(1) != in_features_) {
    throw ValidationError("linear: expected N x " + std::to_string(in_features_) + ", got " + x.shape_string());
  }
  input_ = x;
  Tensor y({x.dim(0), out_features_});
  y.matrix().noalias() = x.matrix() * weight_.value.matrix().transpose();
  if (bias_) {
    const Eigen::Map<const Eigen::RowVectorXd> b(bias_->value.data(), out_features_);
    y.matrix().rowwise() += b;
  }
  return y;
}

Tensor Linear::backward(const Tensor& grad_out) {
  weight_.grad.matrix().noalias() += grad_out.matrix().transpose() * input_.matrix();
  if (bias_) {
    Eigen::Map<Eigen::RowVectorXd> db(bias_->grad.data(), out_features_);
    db += grad_out.matrix().colwise().sum();
  }
  Tensor dx(input_.shape());
  dx.matrix().noalias() = grad_out.matrix() * weight_.value.matrix();
  return dx;
}

void Linear::collect_parameters(std::vector<Parameter*>& out) {
  out.push_back(&weight_);
  if (bias_) out.push_back(bias_.get());
}

// ------------------------------------------------------------ Sequential

Tensor Sequential::forward(const Tensor& x, Mode mode) {
  Tensor y = x;
  for (auto& layer : layers_) y = layer->forward(y, mode);
  return y;
}

Tensor Sequential::backward(const Tensor& grad_out) {
  Tensor g = grad_out;
  for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) g = (*it)->backward(g);
  return g;
}

void Sequential::collect_parameters(std::vector<Parameter*>& out) {
  for (auto& layer : layers_) layer->collect_parameters(out);
}

void Sequential::collect_buffers(std::vector<NamedTensor>& out) {
  for (auto& layer : layers_) layer->collect_buffers(out);
}

// --------------------------------------------------------- ResidualBlock

Tensor ResidualBlock::forward(const Tensor& x, Mode mode) {
  Tensor y = main_.forward(x, mode);
  const Tensor skip = shortcut_.empty() ? x : shortcut_.forward(x, mode);
  if (skip.shape() != y.shape()) {
    throw ValidationError("residual shapes differ: " + y.shape_string() + " vs " + skip.shape_string());
  }
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += skip[i];
  return relu_.forward(y, mode);
}

Tensor ResidualBlock::backward(const Tensor& grad_out) {
  const Tensor g = relu_.backward(grad_out);
  Tensor dx = main_.backward(g);
  const Tensor dskip = shortcut_.empty() ? g : shortcut_.backward(g);
  for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += dskip[i];
  return dx;
}

void ResidualBlock::collect_parameters(std::vector<Parameter*>& out) {
  main_.collect_parameters(out);
  shortcut_.collect_parameters(out);
}

void ResidualBlock::collect_buffers(std::vector<NamedTensor>& out) {
  main_.collect_buffers(out);
  shortcut_.collect_buffers(out);
}

// ------------------------------------------------------------- pooling

Tensor global_average_pool(const Tensor& maps) {
  if (maps.rank() != 4) throw ValidationError("global average pool expects rank 4, got " + maps.shape_string());
  const int n = maps.dim(0), c = maps.dim(1);
  const std::size_t area = static_cast<std::size_t>(maps.dim(2)) * maps.dim(3);
  Tensor h({n, c});
  for (std::size_t p = 0; p < static_cast<std::size_t>(n) * c; ++p) {
    double acc = 0.0;
    for (std::size_t i = 0; i < area; ++i) acc += maps[p * area + i];
    h[p] = acc / static_cast<double>(area);
  }
  return h;
}

Tensor global_average_pool_backward(const Tensor& grad, const std::vector<int>& maps_shape) {
  Tensor d(maps_shape);
  const std::size_t area = static_cast<std::size_t>(maps_shape.at(2)) * maps_shape.at(3);
  const double scale = 1.0 / static_cast<double>(area);
  for (std::size_t p = 0; p < grad.size(); ++p) {
    for (std::size_t i = 0; i < area; ++i) d[p * area + i] = grad[p] * scale;
  }
  return d;
}

}  // namespace fringe
