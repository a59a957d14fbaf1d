#pragma once

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <random>
#include <string>

#include "ncagc/graph_io.hpp"
#include "ncagc/types.hpp"

namespace testutil {

using ncagc::Adjacency;
using ncagc::Index;
using ncagc::Matrix;

inline Matrix random_matrix(Index rows, Index cols, std::mt19937_64& rng, double lo = -1.0,
                            double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = u(rng);
  }
  return m;
}

/// Symmetric Erdos-Renyi adjacency, optionally with every self-loop.
inline Adjacency random_adjacency(Index n, double p, std::mt19937_64& rng, bool self_loops) {
  std::bernoulli_distribution edge(p);
  std::vector<std::pair<int, int>> edges;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (edge(rng)) edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  }
  Adjacency a = ncagc::adjacency_from_edges(n, edges);
  return self_loops ? ncagc::add_self_loops(a) : a;
}

inline ncagc::Graph random_graph(Index n, Index d, int k, std::mt19937_64& rng) {
  ncagc::Graph g;
  g.name = "random";
  g.attributes = random_matrix(n, d, rng, 0.0, 1.0);
  g.adjacency = random_adjacency(n, 0.5, rng, false);
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) labels[i] = static_cast<int>(i % k);
  g.labels = labels;
  g.num_clusters = k;
  return g;
}

/// ||a - b|| / max(||a||, ||b||), with a floor so two near-zero tensors compare equal.
inline double relative_error(const Matrix& a, const Matrix& b) {
  const double scale = std::max({a.norm(), b.norm(), 1e-10});
  return (a - b).norm() / scale;
}

/// Fourth-order central difference of `f` at the current value of `x`.
/// The wider stencil keeps round-off small next to gradients many orders of
/// magnitude below the objective.
inline double central_difference(double& x, const auto& f, double h) {
  const double saved = x;
  auto at = [&](double offset) {
    x = saved + offset;
    return f();
  };
  const double d = (8.0 * (at(h) - at(-h)) - (at(2.0 * h) - at(-2.0 * h))) / (12.0 * h);
  x = saved;
  return d;
}

/// Numeric gradient of `f` with respect to every entry of `x`.
template <typename F>
Matrix numeric_gradient(Matrix& x, F f, double h = 1e-4) {
  Matrix g(x.rows(), x.cols());
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < x.cols(); ++j) g(i, j) = central_difference(x(i, j), f, h);
  }
  return g;
}

inline double numeric_derivative(double& x, const auto& f, double h = 1e-4) {
  return central_difference(x, f, h);
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("ncagc_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Same partition up to renaming of label ids.
inline bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if ((a[i] == a[j]) != (b[i] == b[j])) return false;
    }
  }
  return true;
}

}  // namespace testutil
