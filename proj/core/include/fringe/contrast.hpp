#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fringe/tensor.hpp"

namespace fringe {

struct LossConfig {
  double temperature = 0.5;
  /// Lower bound on embedding norms inside the cosine similarity.
  double eps = 1e-12;

  void validate() const;
};

/// x.y / (max(|x|, eps) max(|y|, eps)). Zero vectors have similarity 0.
double cosine_sim(std::span<const double> x, std::span<const double> y, double eps = 1e-12);

/// Index of the positive partner of row i when a batch of 2N embeddings is
/// laid out as consecutive (view_i, view_j) pairs: rows 2k and 2k+1.
inline std::size_t positive_partner(std::size_t i) {
  return i ^ std::size_t{1};
}

/// NT-Xent term for anchor i and positive j:
///   -log( exp(sim(i,j)/t) / sum_{k != i} exp(sim(i,k)/t) )
/// over the rows of z (2N x D). Throws ValidationError if i == j or an index
/// is out of range.
double ntxent_pair(const RowMatrix& z, std::size_t i, std::size_t j, const LossConfig& config);

struct BatchLossReport {
  RowMatrix similarity;                ///< 2N x 2N cosine similarities
  std::vector<double> per_pair_losses;  ///< entry i is l(i, positive_partner(i))
  double total = 0.0;                   ///< mean over the 2N ordered positive pairs
  std::size_t batch_size = 0;           ///< N (source patches)
  double temperature = 0.0;
};

/// Loss over every ordered positive pair of a 2N x D embedding batch laid out
/// as (view_i, view_j) pairs. If grad is non-null it receives dTotal/dz.
/// Throws ValidationError for an odd or empty row count.
BatchLossReport ntxent_batch(const RowMatrix& z, const LossConfig& config, RowMatrix* grad = nullptr);

}  // namespace fringe
