#include "fringe/contrast.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fringe/error.hpp"

namespace fringe {

void LossConfig::validate() const {
  if (!(temperature > 0.0)) throw ValidationError("loss temperature must be > 0");
  if (!(eps > 0.0)) throw ValidationError("loss eps must be > 0");
}

double cosine_sim(std::span<const double> x, std::span<const double> y, double eps) {
  if (x.size() != y.size()) throw ValidationError("cosine_sim: width mismatch");
  double dot = 0.0, xx = 0.0, yy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    dot += x[k] * y[k];
    xx += x[k] * x[k];
    yy += y[k] * y[k];
  }
  const double s = dot / (std::max(std::sqrt(xx), eps) * std::max(std::sqrt(yy), eps));
  return std::clamp(s, -1.0, 1.0);
}

namespace {

/// Rows scaled to unit norm (norm floored at eps); norms returned unclamped.
RowMatrix normalized_rows(const RowMatrix& z, double eps, Eigen::VectorXd& norms) {
  norms = z.rowwise().norm();
  RowMatrix u = z;
  for (Eigen::Index r = 0; r < z.rows(); ++r) u.row(r) /= std::max(norms(r), eps);
  return u;
}

/// -log softmax of sims(j) over k != i, with max subtraction; sims is row i of S.
double anchor_loss(const Eigen::Ref<const Eigen::RowVectorXd>& sims, Eigen::Index i, Eigen::Index j, double tau,
                   Eigen::RowVectorXd* prob = nullptr) {
  const Eigen::Index m = sims.size();
  double row_max = -std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < m; ++k) {
    if (k != i) row_max = std::max(row_max, sims(k) / tau);
  }
  double denom = 0.0;
  for (Eigen::Index k = 0; k < m; ++k) {
    if (k != i) denom += std::exp(sims(k) / tau - row_max);
  }
  if (prob) {
    prob->setZero(m);
    for (Eigen::Index k = 0; k < m; ++k) {
      if (k != i) (*prob)(k) = std::exp(sims(k) / tau - row_max) / denom;
    }
  }
  return std::max(0.0, -(sims(j) / tau - row_max) + std::log(denom));
}

}  // namespace

double ntxent_pair(const RowMatrix& z, std::size_t i, std::size_t j, const LossConfig& config) {
  config.validate();
  const auto n = static_cast<std::size_t>(z.rows());
  if (n < 2) throw ValidationError("ntxent_pair needs at least 2 embeddings");
  if (i >= n || j >= n) throw ValidationError("ntxent_pair: index out of range");
  if (i == j) throw ValidationError("ntxent_pair: anchor and positive must differ");
  Eigen::VectorXd norms;
  const RowMatrix u = normalized_rows(z, config.eps, norms);
  const Eigen::RowVectorXd sims =
      (u * u.row(static_cast<Eigen::Index>(i)).transpose()).cwiseMax(-1.0).cwiseMin(1.0).transpose();
  return anchor_loss(sims, static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j), config.temperature);
}

BatchLossReport ntxent_batch(const RowMatrix& z, const LossConfig& config, RowMatrix* grad) {
  config.validate();
  const Eigen::Index m = z.rows();
  if (m < 2 || m % 2 != 0) {
    throw ValidationError("ntxent_batch needs an even, non-zero number of embeddings, got " + std::to_string(m));
  }
  const double tau = config.temperature;

  Eigen::VectorXd norms;
  const RowMatrix u = normalized_rows(z, config.eps, norms);
  BatchLossReport report;
  report.similarity = (u * u.transpose()).cwiseMax(-1.0).cwiseMin(1.0);
  report.batch_size = static_cast<std::size_t>(m / 2);
  report.temperature = tau;
  report.per_pair_losses.resize(static_cast<std::size_t>(m));

  RowMatrix prob(m, m);
  Eigen::RowVectorXd prob_row;
  double total = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto j = static_cast<Eigen::Index>(positive_partner(static_cast<std::size_t>(i)));
    const double l = anchor_loss(report.similarity.row(i), i, j, tau, grad ? &prob_row : nullptr);
    if (grad) prob.row(i) = prob_row;
    report.per_pair_losses[static_cast<std::size_t>(i)] = l;
    total += l;
  }
  report.total = total / static_cast<double>(m);

  if (grad) {
    // dL/dS(i,k) = (p(i,k) - [k == j(i)]) / (tau m); S(i,k) = u_i . u_k.
    RowMatrix ds = prob;
    for (Eigen::Index i = 0; i < m; ++i) ds(i, static_cast<Eigen::Index>(positive_partner(static_cast<std::size_t>(i)))) -= 1.0;
    ds /= tau * static_cast<double>(m);
    const RowMatrix du = (ds + ds.transpose()) * u;
    grad->resize(m, z.cols());
    for (Eigen::Index r = 0; r < m; ++r) {
      if (norms(r) > config.eps) {
        const double radial = du.row(r).dot(u.row(r));
        grad->row(r) = (du.row(r) - radial * u.row(r)) / norms(r);
      } else {
        grad->row(r) = du.row(r) / config.eps;
      }
    }
  }
  return report;
}

}  // namespace fringe
