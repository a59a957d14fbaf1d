#include <doctest.h>

#include <set>

#include "ncagc/clustering.hpp"
#include "ncagc/metrics.hpp"
#include "test_util.hpp"

using namespace ncagc;

namespace {

// Coefficient matrix of tests/oracles/affinity.py.
Matrix oracle_coefficients() {
  Matrix c(6, 6);
  c << 0.0, 0.8, 0.6, 0.05, -0.02, 0.01, 0.7, 0.0, 0.9, 0.03, 0.04, -0.05, 0.5, 0.6, 0.0, -0.01,
      0.02, 0.06, 0.02, -0.04, 0.03, 0.0, 0.8, 0.7, 0.06, 0.01, -0.03, 0.9, 0.0, 0.5, -0.02, 0.05,
      0.01, 0.6, 0.7, 0.0;
  c.diagonal().array() += 0.3;
  return c;
}

// Independent column thresholding: keep the largest magnitudes until the kept
// squared sum reaches `fraction` of the column total.
Matrix threshold_oracle(Matrix c, double fraction) {
  c.diagonal().setZero();
  for (Index col = 0; col < c.cols(); ++col) {
    std::vector<std::pair<double, Index>> entries;
    double total = 0.0;
    for (Index r = 0; r < c.rows(); ++r) {
      entries.emplace_back(-std::abs(c(r, col)), r);
      total += c(r, col) * c(r, col);
    }
    std::sort(entries.begin(), entries.end());
    double kept = 0.0;
    bool done = false;
    for (const auto& [neg, r] : entries) {
      if (done) {
        c(r, col) = 0.0;
        continue;
      }
      kept += c(r, col) * c(r, col);
      if (kept >= fraction * total) done = true;
    }
  }
  return c;
}

std::vector<int> block_labels(const std::vector<int>& sizes) {
  std::vector<int> labels;
  for (std::size_t b = 0; b < sizes.size(); ++b) labels.insert(labels.end(), sizes[b], static_cast<int>(b));
  return labels;
}

Matrix block_affinity(const std::vector<int>& labels, double within, double across) {
  const Index n = static_cast<Index>(labels.size());
  Matrix a(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) a(i, j) = labels[i] == labels[j] ? within : across;
  }
  return a;
}

void check_assignment(const ClusterAssignment& a, Index n, int k) {
  CHECK(static_cast<Index>(a.labels.size()) == n);
  CHECK(a.num_clusters == k);
  std::set<int> used(a.labels.begin(), a.labels.end());
  CHECK(static_cast<int>(used.size()) <= k);
  for (int l : a.labels) CHECK((l >= 0 && l < k));
}

double normalized_cut(const Matrix& w, const std::vector<int>& labels) {
  double cut = 0.0, vol0 = 0.0, vol1 = 0.0;
  for (Index i = 0; i < w.rows(); ++i) {
    (labels[i] == 0 ? vol0 : vol1) += w.row(i).sum();
    for (Index j = 0; j < w.cols(); ++j) {
      if (labels[i] == 0 && labels[j] == 1) cut += w(i, j);
    }
  }
  return cut / vol0 + cut / vol1;
}

}  // namespace

TEST_SUITE("clustering") {

TEST_CASE("build_affinity fixed point and absolute-value symmetrization") {
  AffinityOptions off;
  off.smoothing = false;
  Matrix sym(3, 3);
  sym << 0, 0.4, 1.2, 0.4, 0, 0.7, 1.2, 0.7, 0;
  CHECK(build_affinity(SelfExpressionMatrix{sym}, 2, off) == sym);

  Matrix c(2, 2);
  c << 0, -2, 4, 0;
  Matrix expected(2, 2);
  expected << 0, 3, 3, 0;
  CHECK(build_affinity(SelfExpressionMatrix{c}, 2, off) == expected);
}

TEST_CASE("build_affinity matches the reference construction") {
  // values from tests/oracles/affinity.py
  const SelfExpressionMatrix c{oracle_coefficients()};
  AffinityOptions thresholded;
  thresholded.energy_fraction = 0.7;
  thresholded.smoothing = false;
  Matrix expected(6, 6);
  expected << 0, 0.75, 0.55000000000000004, 0, 0, 0, 0.75, 0, 0.75, 0, 0, 0, 0.55000000000000004,
      0.75, 0, 0, 0, 0, 0, 0, 0, 0, 0.85000000000000009, 0.64999999999999991, 0, 0, 0,
      0.85000000000000009, 0, 0.59999999999999998, 0, 0, 0, 0.64999999999999991,
      0.59999999999999998, 0;
  CHECK(testutil::relative_error(build_affinity(c, 2, thresholded), expected) < 1e-15);

  AffinityOptions smoothed;
  smoothed.energy_fraction = 1.0;
  smoothed.rank_multiplier = 1;
  smoothed.smoothing_power = 4.0;
  Matrix reference(6, 6);
  reference << 0.99999999999999867, 0.80703626447977894, 0.99967235712609126,
      0.00026822107333821838, 0, 1.5067008877626258e-05, 0.80703626447977894, 1,
      0.79494464435049994, 0, 0.0011458681097357227, 0.00010212333271671546,
      0.99967235712609126, 0.79494464435049994, 0.99999999999999867, 0.00028846147026241554, 0,
      8.7075277265798881e-06, 0.00026822107333821838, 0, 0.00028846147026241554,
      0.99999999999999867, 0.00013493451426859978, 0.18168427255260031, 0, 0.0011458681097357227,
      0, 0.00013493451426859978, 0.99999999999999867, 0.45950639452681358, 1.5067008877626258e-05,
      0.00010212333271671546, 8.7075277265798881e-06, 0.18168427255260031, 0.45950639452681358,
      0.99999999999999911;
  const Matrix got = build_affinity(c, 2, smoothed);
  // Different eigensolvers agree to rounding only.
  CHECK((got - reference).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("build_affinity keeps at least the requested column energy") {
  std::mt19937_64 rng(17);
  for (double fraction : {0.3, 0.6, 0.9, 1.0}) {
    for (int trial = 0; trial < 10; ++trial) {
      const Matrix c = testutil::random_matrix(6, 6, rng);
      AffinityOptions options;
      options.energy_fraction = fraction;
      options.smoothing = false;
      const Matrix got = build_affinity(SelfExpressionMatrix{c}, 2, options);
      const Matrix kept = threshold_oracle(c, fraction);
      const Matrix expected = 0.5 * (kept.cwiseAbs() + kept.cwiseAbs().transpose());
      CHECK(testutil::relative_error(got, expected) < 1e-15);
      Matrix zero_diag = c;
      zero_diag.diagonal().setZero();
      for (Index col = 0; col < 6; ++col) {
        CHECK(kept.col(col).squaredNorm() >= fraction * zero_diag.col(col).squaredNorm() - 1e-15);
      }
    }
  }
}

TEST_CASE("property: build_affinity output is symmetric and nonnegative on 100 random C") {
  std::mt19937_64 rng(18);
  std::uniform_int_distribution<int> n_dist(3, 25);
  std::uniform_real_distribution<double> fraction(0.05, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = n_dist(rng);
    AffinityOptions options;
    options.energy_fraction = fraction(rng);
    options.smoothing = trial % 2 == 0;
    options.rank_multiplier = 1 + trial % 4;
    const Matrix a = build_affinity(SelfExpressionMatrix{testutil::random_matrix(n, n, rng)},
                                    2 + trial % 3, options);
    CAPTURE(trial);
    CHECK(a == a.transpose());
    CHECK((a.array() >= 0.0).all());
    CHECK(a.allFinite());
  }
}

TEST_CASE("degenerate and invalid inputs") {
  CHECK_THROWS_WITH_AS(build_affinity(SelfExpressionMatrix{Matrix::Zero(4, 4)}, 2),
                       "degenerate coefficients", ValidationError);
  CHECK_THROWS_WITH_AS(build_affinity(SelfExpressionMatrix{Matrix::Identity(4, 4)}, 2),
                       "degenerate coefficients", ValidationError);
  AffinityOptions bad;
  bad.energy_fraction = 0.0;
  CHECK_THROWS_AS(build_affinity(SelfExpressionMatrix{Matrix::Ones(3, 3)}, 2, bad), ConfigError);
  bad.energy_fraction = 1.0;
  bad.rank_multiplier = 0;
  CHECK_THROWS_AS(build_affinity(SelfExpressionMatrix{Matrix::Ones(3, 3)}, 2, bad), ConfigError);
}

TEST_CASE("spectral clustering examples") {
  SUBCASE("two all-ones blocks of sizes 3 and 4") {
    const auto truth = block_labels({3, 4});
    const auto a = spectral_clustering(block_affinity(truth, 1.0, 0.0), 2, 0);
    check_assignment(a, 7, 2);
    CHECK(testutil::same_partition(a.labels, truth));
  }
  SUBCASE("all-ones, k = 1") {
    const auto a = spectral_clustering(Matrix::Ones(6, 6), 1, 0);
    CHECK(a.labels == std::vector<int>(6, 0));
  }
  SUBCASE("three noisy blocks") {
    const auto truth = block_labels({5, 7, 6});
    const auto a = spectral_clustering(block_affinity(truth, 1.0, 0.01), 3, 3);
    CHECK(clustering_accuracy(a.labels, truth) == 1.0);
  }
  SUBCASE("an isolated node does not break the Laplacian") {
    auto truth = block_labels({4, 4});
    Matrix w = block_affinity(truth, 1.0, 0.0);
    Matrix padded = Matrix::Zero(9, 9);
    padded.topLeftCorner(8, 8) = w;
    const auto a = spectral_clustering(padded, 3, 1);
    check_assignment(a, 9, 3);
  }
}

TEST_CASE("spectral clustering rejects invalid affinities") {
  Matrix asym = Matrix::Ones(3, 3);
  asym(0, 1) = 2.0;
  CHECK_THROWS_AS(spectral_clustering(asym, 2, 0), ValidationError);
  Matrix negative = Matrix::Ones(3, 3);
  negative(0, 1) = negative(1, 0) = -1.0;
  CHECK_THROWS_AS(spectral_clustering(negative, 2, 0), ValidationError);
  CHECK_THROWS_AS(spectral_clustering(Matrix::Ones(3, 3), 4, 0), ConfigError);
  CHECK_THROWS_AS(spectral_clustering(Matrix::Ones(3, 3), 0, 0), ConfigError);
}

TEST_CASE("property: spectral clustering recovers block-diagonal affinities for k in {2,3,4}") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> size(3, 9);
  std::uniform_real_distribution<double> weight(0.2, 1.0);
  for (int k = 2; k <= 4; ++k) {
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<int> sizes;
      for (int b = 0; b < k; ++b) sizes.push_back(size(rng));
      const auto truth = block_labels(sizes);
      const Index n = static_cast<Index>(truth.size());
      Matrix a = Matrix::Zero(n, n);
      for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
          if (truth[i] == truth[j]) a(i, j) = a(j, i) = weight(rng);
        }
      }
      const auto got = spectral_clustering(a, k, static_cast<std::uint64_t>(trial));
      CAPTURE(k);
      CAPTURE(trial);
      CHECK(clustering_accuracy(got.labels, truth) == 1.0);
    }
  }
}

TEST_CASE("property: spectral clustering is invariant under node permutation") {
  std::mt19937_64 rng(22);
  const auto truth = block_labels({6, 5, 7});
  const Index n = static_cast<Index>(truth.size());
  std::uniform_real_distribution<double> noise(0.0, 0.05);
  Matrix a = block_affinity(truth, 1.0, 0.0);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) a(i, j) = a(j, i) = a(i, j) + noise(rng);
  }
  const auto base = spectral_clustering(a, 3, 5).labels;
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix p(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) p(i, j) = a(perm[i], perm[j]);
    }
    const auto permuted = spectral_clustering(p, 3, 5).labels;
    std::vector<int> back(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) back[perm[i]] = permuted[i];
    CHECK(testutil::same_partition(back, base));
  }
}

TEST_CASE("k-means examples") {
  std::mt19937_64 rng(30);
  SUBCASE("two separated blobs") {
    std::normal_distribution<double> g(0.0, 0.3);
    Matrix pts(40, 2);
    std::vector<int> truth;
    for (Index i = 0; i < 40; ++i) {
      const double cx = i < 20 ? -5.0 : 5.0;
      pts(i, 0) = cx + g(rng);
      pts(i, 1) = g(rng);
      truth.push_back(i < 20 ? 0 : 1);
    }
    const auto r = kmeans(pts, 2, 1);
    check_assignment(r.assignment, 40, 2);
    CHECK(testutil::same_partition(r.assignment.labels, truth));
  }
  SUBCASE("identical points, k = 2") {
    const Matrix pts = Matrix::Constant(8, 3, 1.5);
    const auto r = kmeans(pts, 2, 1);
    check_assignment(r.assignment, 8, 2);
    CHECK(r.inertia == 0.0);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(kmeans(Matrix::Ones(3, 2), 4, 0), ConfigError);
    CHECK_THROWS_AS(kmeans(Matrix::Ones(3, 2), 0, 0), ConfigError);
  }
}

TEST_CASE("k-means matches exhaustive 2-partition search on 20 points") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix pts(20, 2);
  for (Index i = 0; i < 20; ++i) {
    pts(i, 0) = g(rng) + (i % 2 == 0 ? 1.5 : -1.5);
    pts(i, 1) = g(rng);
  }
  // SSE of a split = sum |x|^2 - |S_A|^2 / n_A - |S_B|^2 / n_B; node 0 is pinned to A.
  const double total_sq = pts.squaredNorm();
  const RowVector total = pts.colwise().sum();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < (1u << 19); ++mask) {
    RowVector sum_a = pts.row(0);
    int count_a = 1;
    for (int b = 0; b < 19; ++b) {
      if (mask & (1u << b)) {
        sum_a += pts.row(b + 1);
        ++count_a;
      }
    }
    if (count_a == 20) continue;
    const RowVector sum_b = total - sum_a;
    const double sse =
        total_sq - sum_a.squaredNorm() / count_a - sum_b.squaredNorm() / (20 - count_a);
    best = std::min(best, sse);
  }
  const auto r = kmeans(pts, 2, 7);
  CHECK(std::abs(r.inertia - best) < 1e-9);
}

TEST_CASE("k-means is deterministic for a fixed seed") {
  std::mt19937_64 rng(32);
  const Matrix pts = testutil::random_matrix(50, 3, rng);
  const auto a = kmeans(pts, 4, 11);
  const auto b = kmeans(pts, 4, 11);
  CHECK(a.assignment.labels == b.assignment.labels);
  CHECK(a.inertia == b.inertia);
  CHECK(a.centroids == b.centroids);
}

TEST_CASE("spectral baseline examples") {
  SUBCASE("two disjoint cliques") {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        edges.emplace_back(i, j);
        edges.emplace_back(i + 4, j + 4);
      }
    }
    const auto a = spectral_baseline(adjacency_from_edges(8, edges), 2, 0);
    CHECK(testutil::same_partition(a.labels, {0, 0, 0, 0, 1, 1, 1, 1}));
  }
  SUBCASE("path of four nodes gives a minimum normalized cut") {
    const Adjacency path = adjacency_from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
    const auto a = spectral_baseline(path, 2, 0);
    check_assignment(a, 4, 2);
    const Matrix w(path);
    double best = std::numeric_limits<double>::infinity();
    for (int mask = 1; mask < 15; ++mask) {
      std::vector<int> labels(4);
      for (int i = 0; i < 4; ++i) labels[i] = (mask >> i) & 1;
      best = std::min(best, normalized_cut(w, labels));
    }
    std::vector<int> got = a.labels;
    if (got[0] == 1) {
      for (int& l : got) l = 1 - l;
    }
    CHECK(normalized_cut(w, got) == doctest::Approx(best).epsilon(1e-12));
    CHECK(testutil::same_partition(a.labels, {0, 0, 1, 1}));
  }
  SUBCASE("single clique, k = 1") {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < 5; ++i) {
      for (int j = i + 1; j < 5; ++j) edges.emplace_back(i, j);
    }
    CHECK(spectral_baseline(adjacency_from_edges(5, edges), 1, 0).labels == std::vector<int>(5, 0));
  }
}

}  // TEST_SUITE
