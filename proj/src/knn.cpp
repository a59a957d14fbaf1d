#include "ncagc/knn.hpp"

#include <algorithm>
#include <numeric>

#include "ncagc/similarity.hpp"

namespace ncagc {

PositiveMask::PositiveMask(int k, std::vector<std::vector<Index>> positives)
    : k_(k), positives_(std::move(positives)) {}

bool PositiveMask::contains(Index node, Index other) const {
  const auto& row = positives_[node];
  return std::binary_search(row.begin(), row.end(), other);
}

Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> PositiveMask::dense() const {
  const Index n = num_nodes();
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> mask =
      Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, n, false);
  for (Index i = 0; i < n; ++i) {
    for (const Index j : positives_[i]) mask(i, j) = true;
  }
  return mask;
}

PositiveMask knn_positive_mask(const Matrix& representations, int k) {
  if (k <= 0) throw ConfigError("neighbourhood size K must be positive");
  const Index n = representations.rows();
  if (n < 2) throw ValidationError("KNN needs at least two nodes");
  if (!representations.allFinite()) throw ValidationError("KNN input contains NaN or Inf");

  const Matrix unit = normalize_rows(representations);
  const Matrix similarity = unit * unit.transpose();
  const Index take = std::min<Index>(k, n - 1);

  std::vector<std::vector<Index>> positives(static_cast<std::size_t>(n));
  std::vector<Index> order(static_cast<std::size_t>(n - 1));
  for (Index i = 0; i < n; ++i) {
    auto row = similarity.row(i);
    std::iota(order.begin(), order.begin() + i, Index{0});
    std::iota(order.begin() + i, order.end(), i + 1);
    const auto closer = [&](Index a, Index b) {
      if (row[a] != row[b]) return row[a] > row[b];
      return a < b;
    };
    std::partial_sort(order.begin(), order.begin() + take, order.end(), closer);
    std::vector<Index> chosen(order.begin(), order.begin() + take);
    std::sort(chosen.begin(), chosen.end());
    positives[static_cast<std::size_t>(i)] = std::move(chosen);
  }
  return PositiveMask(k, std::move(positives));
}

}  // namespace ncagc
