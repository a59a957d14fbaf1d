#pragma once

#include <cstdint>
#include <vector>

#include "ncagc/self_expression.hpp"
#include "ncagc/types.hpp"

namespace ncagc {

struct ClusterAssignment {
  std::vector<int> labels;
  int num_clusters = 0;
};

/// Post-processing that turns self-expression coefficients into an affinity.
struct AffinityOptions {
  /// Per-column share of squared magnitude kept by thresholding; 1 keeps all.
  double energy_fraction = 1.0;
  /// Low-rank smoothing keeps rank_multiplier * k + 1 leading eigen-directions.
  int rank_multiplier = 4;
  bool smoothing = true;
  /// Exponent applied to the smoothed, clipped similarities.
  double smoothing_power = 4.0;
};

/// C -> symmetric nonnegative affinity:
///   1. zero the diagonal;
///   2. per column, keep the largest-magnitude entries until their squared
///      sum reaches energy_fraction of the column's squared sum;
///   3. symmetrize, (|C'| + |C'|^T) / 2;
///   4. optionally project onto the rank_multiplier*k+1 dominant
///      eigen-directions scaled by sqrt|eigenvalue|, row-normalize, take
///      max(U U^T, 0)^power and rescale to a maximum of 1.
/// Throws ValidationError("degenerate coefficients") when the zero-diagonal
/// matrix is identically zero.
Matrix build_affinity(const SelfExpressionMatrix& c, int num_clusters,
                      const AffinityOptions& options = {});

struct KMeansResult {
  ClusterAssignment assignment;
  Matrix centroids;
  double inertia = 0.0;
};

/// Lloyd's algorithm with k-means++ seeding, best of `restarts` runs by
/// within-cluster sum of squares. An empty cluster is re-seeded at the point
/// farthest from its centroid. Deterministic for a fixed seed.
KMeansResult kmeans(const Matrix& points, int k, std::uint64_t seed, int restarts = 10,
                    int max_iterations = 300);

/// Normalized spectral clustering: the k smallest eigenvectors of
/// I - D^-1/2 A D^-1/2 (zero degrees replaced by 1), rows scaled to unit
/// length, then k-means.
ClusterAssignment spectral_clustering(const Matrix& affinity, int k, std::uint64_t seed,
                                      int restarts = 10);

/// Spectral clustering with the raw adjacency as the affinity.
ClusterAssignment spectral_baseline(const Adjacency& adjacency, int k, std::uint64_t seed,
                                    int restarts = 10);

}  // namespace ncagc
