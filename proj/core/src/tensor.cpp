#include "fringe/tensor.hpp"

#include <algorithm>
#include <numeric>

#include "fringe/error.hpp"

namespace fringe {

std::size_t element_count(const std::vector<int>& shape) {
  std::size_t n = 1;
  for (int d : shape) {
    if (d < 0) throw ValidationError("negative tensor dimension");
    n *= static_cast<std::size_t>(d);
  }
  return shape.empty() ? 0 : n;
}

Tensor::Tensor(std::vector<int> shape, double fill) : shape_(std::move(shape)), data_(element_count(shape_), fill) {}

void Tensor::fill(double v) {
  std::fill(data_.begin(), data_.end(), v);
}

Tensor Tensor::reshaped(std::vector<int> shape) const {
  if (element_count(shape) != size()) {
    throw ValidationError("cannot reshape " + shape_string() + " to a different element count");
  }
  Tensor t = *this;
  t.shape_ = std::move(shape);
  return t;
}

MatrixMap Tensor::matrix() {
  const auto rows = static_cast<Eigen::Index>(shape_.empty() ? 0 : shape_[0]);
  const auto cols = rows == 0 ? 0 : static_cast<Eigen::Index>(size() / static_cast<std::size_t>(rows));
  return {data_.data(), rows, cols};
}

ConstMatrixMap Tensor::matrix() const {
  const auto rows = static_cast<Eigen::Index>(shape_.empty() ? 0 : shape_[0]);
  const auto cols = rows == 0 ? 0 : static_cast<Eigen::Index>(size() / static_cast<std::size_t>(rows));
  return {data_.data(), rows, cols};
}

std::string Tensor::shape_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape_[i]);
  }
  return s + "]";
}

}  // namespace fringe
