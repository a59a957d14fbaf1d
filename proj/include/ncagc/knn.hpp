#pragma once

#include <vector>

#include "ncagc/types.hpp"

namespace ncagc {

/// Per-node set of contrastive positives.
///
/// Row i lists, in ascending node order, the min(K, N-1) nodes most
/// cosine-similar to node i. A node is never its own positive.
class PositiveMask {
 public:
  PositiveMask() = default;
  PositiveMask(int k, std::vector<std::vector<Index>> positives);

  Index num_nodes() const { return static_cast<Index>(positives_.size()); }
  int k() const { return k_; }
  const std::vector<Index>& positives(Index node) const { return positives_[node]; }
  bool contains(Index node, Index other) const;

  /// Dense N x N boolean view.
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> dense() const;

  friend bool operator==(const PositiveMask&, const PositiveMask&) = default;

 private:
  int k_ = 0;
  std::vector<std::vector<Index>> positives_;
};

/// Top-K cosine neighbours of every row, self excluded, ties broken towards
/// the lower node index. Zero-norm rows have similarity 0 to everything.
/// Throws ConfigError for K <= 0 and ValidationError for fewer than 2 rows
/// or non-finite input.
PositiveMask knn_positive_mask(const Matrix& representations, int k);

}  // namespace ncagc
