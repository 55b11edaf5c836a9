#pragma once

// Independent reference implementations used to check the library. They are
// deliberately naive: plain loops, no shared helpers with the code under test.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fringe/tensor.hpp"

namespace fringe::oracle {

/// Cosine similarity by explicit sums (norms floored at eps).
double cosine(const double* x, const double* y, std::size_t d, double eps = 1e-12);

/// NT-Xent by the textbook double loop: for every anchor i with partner i^1,
/// -log(exp(s_ij/t) / sum_{k != i} exp(s_ik/t)), averaged over all 2N anchors.
double ntxent(const RowMatrix& z, double tau, std::vector<double>* per_anchor = nullptr);

/// Direct 7-deep loop convolution; w holds out x in x k x k values.
Tensor conv2d(const Tensor& x, const Tensor& w, const Tensor* bias, int kernel, int stride, int pad);

/// Central differences of f with respect to every entry of x (restored afterwards).
std::vector<double> central_difference(const std::function<double()>& f, std::span<double> x, double h = 1e-6);

/// |a - b| <= rtol * max(|a|, |b|) + atol
bool close(double a, double b, double rtol, double atol = 1e-9);

/// Ridge-regularised logistic regression fitted by full-batch gradient descent.
struct Logistic {
  std::vector<double> w;
  double b = 0.0;
  int predict(std::span<const double> x) const;
};
Logistic fit_logistic(const std::vector<std::vector<double>>& x, const std::vector<int>& y, double l2,
                      int iterations, double step);

/// Truncation towards zero at a decimal place (0.9719 -> 0.971 at 3).
double truncate_decimals(double v, int decimals);

}  // namespace fringe::oracle
