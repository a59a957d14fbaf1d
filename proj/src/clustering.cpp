#include "ncagc/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "ncagc/eigen_solver.hpp"
#include "ncagc/similarity.hpp"

namespace ncagc {
namespace {

void threshold_columns(Matrix& c, double energy_fraction) {
  if (energy_fraction >= 1.0) return;
  const Index n = c.rows();
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index col = 0; col < c.cols(); ++col) {
    const double total = c.col(col).squaredNorm();
    if (total == 0.0) continue;
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
      return std::abs(c(a, col)) > std::abs(c(b, col));
    });
    double kept = 0.0;
    std::size_t t = 0;
    for (; t < order.size(); ++t) {
      kept += c(order[t], col) * c(order[t], col);
      if (kept >= energy_fraction * total) {
        ++t;
        break;
      }
    }
    for (; t < order.size(); ++t) c(order[t], col) = 0.0;
  }
}

Matrix low_rank_smooth(const Matrix& affinity, Index rank, double power) {
  const Index n = affinity.rows();
  rank = std::min(rank, n);
  // Dominant directions by |eigenvalue|: gather both ends of the spectrum.
  std::vector<std::pair<double, Vector>> candidates;
  auto collect = [&](Index first, Index last) {
    const EigenPairs pairs = symmetric_eigenpairs(affinity, first, last);
    for (Index i = 0; i < pairs.values.size(); ++i) {
      candidates.emplace_back(pairs.values[i], pairs.vectors.col(i));
    }
  };
  if (2 * rank >= n) {
    collect(0, n - 1);
  } else {
    collect(0, rank - 1);
    collect(n - rank, n - 1);
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    return std::abs(a.first) > std::abs(b.first);
  });

  Matrix basis(n, rank);
  for (Index r = 0; r < rank; ++r) {
    basis.col(r) = candidates[r].second * std::sqrt(std::abs(candidates[r].first));
  }
  basis = normalize_rows(basis);
  Matrix smoothed = basis * basis.transpose();
  smoothed = smoothed.cwiseMax(0.0).array().pow(power).matrix();
  const double peak = smoothed.maxCoeff();
  if (!(peak > 0.0)) throw ValidationError("degenerate coefficients");
  smoothed /= peak;
  return 0.5 * (smoothed + smoothed.transpose());
}

double squared_distance(const Eigen::Ref<const RowVector>& a, const Eigen::Ref<const RowVector>& b) {
  return (a - b).squaredNorm();
}

struct LloydRun {
  std::vector<int> labels;
  Matrix centroids;
  double inertia = 0.0;
};

std::vector<int> assign(const Matrix& points, const Matrix& centroids) {
  std::vector<int> labels(static_cast<std::size_t>(points.rows()));
  for (Index i = 0; i < points.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (Index c = 0; c < centroids.rows(); ++c) {
      const double d = squared_distance(points.row(i), centroids.row(c));
      if (d < best) {
        best = d;
        arg = static_cast<int>(c);
      }
    }
    labels[i] = arg;
  }
  return labels;
}

Matrix seed_plus_plus(const Matrix& points, int k, std::mt19937_64& rng) {
  const Index n = points.rows();
  Matrix centroids(k, points.cols());
  std::uniform_int_distribution<Index> pick(0, n - 1);
  centroids.row(0) = points.row(pick(rng));
  Vector closest(n);
  for (Index i = 0; i < n; ++i) closest[i] = squared_distance(points.row(i), centroids.row(0));
  for (int c = 1; c < k; ++c) {
    const double total = closest.sum();
    Index chosen = 0;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      double target = u(rng);
      chosen = n - 1;
      for (Index i = 0; i < n; ++i) {
        target -= closest[i];
        if (target < 0.0) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = pick(rng);
    }
    centroids.row(c) = points.row(chosen);
    for (Index i = 0; i < n; ++i) {
      closest[i] = std::min(closest[i], squared_distance(points.row(i), centroids.row(c)));
    }
  }
  return centroids;
}

LloydRun lloyd(const Matrix& points, Matrix centroids, int max_iterations) {
  const Index n = points.rows();
  const Index k = centroids.rows();
  std::vector<int> labels = assign(points, centroids);
  for (int it = 0; it < max_iterations; ++it) {
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    centroids.setZero();
    for (Index i = 0; i < n; ++i) {
      centroids.row(labels[i]) += points.row(i);
      ++counts[labels[i]];
    }
    for (Index c = 0; c < k; ++c) {
      if (counts[c] > 0) centroids.row(c) /= static_cast<double>(counts[c]);
    }
    const std::vector<int> before = labels;
    for (Index c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      Index farthest = 0;
      double far = -1.0;
      for (Index i = 0; i < n; ++i) {
        if (counts[labels[i]] <= 1) continue;
        const double d = squared_distance(points.row(i), centroids.row(labels[i]));
        if (d > far) {
          far = d;
          farthest = i;
        }
      }
      if (far < 0.0) continue;
      --counts[labels[farthest]];
      labels[farthest] = static_cast<int>(c);
      counts[c] = 1;
      centroids.row(c) = points.row(farthest);
    }
    std::vector<int> next = assign(points, centroids);
    if (next == before) {
      labels = std::move(next);
      break;
    }
    labels = std::move(next);
  }

  LloydRun run;
  run.centroids = Matrix::Zero(k, points.cols());
  std::vector<Index> counts(static_cast<std::size_t>(k), 0);
  for (Index i = 0; i < n; ++i) {
    run.centroids.row(labels[i]) += points.row(i);
    ++counts[labels[i]];
  }
  for (Index c = 0; c < k; ++c) {
    if (counts[c] > 0) run.centroids.row(c) /= static_cast<double>(counts[c]);
    else run.centroids.row(c) = centroids.row(c);
  }
  for (Index i = 0; i < n; ++i) {
    run.inertia += squared_distance(points.row(i), run.centroids.row(labels[i]));
  }
  run.labels = std::move(labels);
  return run;
}

void require_affinity(const Matrix& affinity) {
  const Index n = affinity.rows();
  if (affinity.cols() != n) throw ValidationError("affinity must be square");
  if (!affinity.allFinite()) throw NumericalError("affinity contains NaN or Inf");
  if ((affinity.array() < 0.0).any()) throw ValidationError("affinity has negative entries");
  const double scale = std::max(1.0, affinity.cwiseAbs().maxCoeff());
  if ((affinity - affinity.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw ValidationError("affinity is not symmetric");
  }
}

}  // namespace

Matrix build_affinity(const SelfExpressionMatrix& c, int num_clusters,
                      const AffinityOptions& options) {
  if (!(options.energy_fraction > 0.0 && options.energy_fraction <= 1.0)) {
    throw ConfigError("energy_fraction must lie in (0, 1]");
  }
  if (options.rank_multiplier < 1) throw ConfigError("rank_multiplier must be positive");
  if (!c.coefficients.allFinite()) throw NumericalError("self-expression matrix is not finite");
  Matrix kept = c.effective();
  if (kept.cwiseAbs().maxCoeff() == 0.0) throw ValidationError("degenerate coefficients");
  threshold_columns(kept, options.energy_fraction);
  kept = kept.cwiseAbs();
  Matrix affinity = 0.5 * (kept + kept.transpose());
  if (!options.smoothing) return affinity;
  const Index rank = static_cast<Index>(options.rank_multiplier) * num_clusters + 1;
  return low_rank_smooth(affinity, rank, options.smoothing_power);
}

KMeansResult kmeans(const Matrix& points, int k, std::uint64_t seed, int restarts,
                    int max_iterations) {
  const Index n = points.rows();
  if (k < 1) throw ConfigError("k-means needs k >= 1");
  if (k > n) throw ConfigError("k-means needs k <= number of points");
  if (!points.allFinite()) throw NumericalError("k-means input contains NaN or Inf");
  std::mt19937_64 rng(seed);
  LloydRun best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(1, restarts); ++r) {
    LloydRun run = lloyd(points, seed_plus_plus(points, k, rng), max_iterations);
    if (run.inertia < best.inertia) best = std::move(run);
  }
  return {{std::move(best.labels), k}, std::move(best.centroids), best.inertia};
}

ClusterAssignment spectral_clustering(const Matrix& affinity, int k, std::uint64_t seed,
                                      int restarts) {
  require_affinity(affinity);
  const Index n = affinity.rows();
  if (k < 1 || k > n) throw ConfigError("spectral clustering needs 1 <= k <= N");
  Vector inv_sqrt_degree(n);
  for (Index i = 0; i < n; ++i) {
    const double degree = affinity.row(i).sum();
    inv_sqrt_degree[i] = 1.0 / std::sqrt(degree > 0.0 ? degree : 1.0);
  }
  const Matrix normalized =
      inv_sqrt_degree.asDiagonal() * affinity * inv_sqrt_degree.asDiagonal();
  // Smallest eigenvalues of I - M are the largest of M.
  const EigenPairs top = symmetric_eigenpairs(normalized, n - k, n - 1);
  const Matrix embedding = normalize_rows(top.vectors);
  return kmeans(embedding, k, seed, restarts).assignment;
}

ClusterAssignment spectral_baseline(const Adjacency& adjacency, int k, std::uint64_t seed,
                                    int restarts) {
  const Matrix dense = Matrix(adjacency);
  return spectral_clustering(dense, k, seed, restarts);
}

}  // namespace ncagc
