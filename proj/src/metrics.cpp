#include "ncagc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "json.hpp"

namespace ncagc {
namespace {

struct Contingency {
  Matrix counts;  // rows: predicted clusters, cols: true classes
  Vector row_sums;
  Vector col_sums;
  double n = 0.0;
};

std::vector<int> compact(std::span<const int> labels, int& distinct) {
  std::map<int, int> ids;
  for (const int l : labels) ids.emplace(l, 0);
  int next = 0;
  for (auto& [label, id] : ids) id = next++;
  distinct = next;
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = ids.at(labels[i]);
  return out;
}

Contingency contingency(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size()) {
    throw std::invalid_argument("label vectors differ in length (" +
                                std::to_string(predicted.size()) + " vs " +
                                std::to_string(truth.size()) + ")");
  }
  if (predicted.empty()) throw std::invalid_argument("empty label vectors");
  int kp = 0;
  int kt = 0;
  const auto p = compact(predicted, kp);
  const auto t = compact(truth, kt);
  Contingency c;
  c.counts = Matrix::Zero(kp, kt);
  for (std::size_t i = 0; i < p.size(); ++i) c.counts(p[i], t[i]) += 1.0;
  c.row_sums = c.counts.rowwise().sum();
  c.col_sums = c.counts.colwise().sum().transpose();
  c.n = static_cast<double>(p.size());
  return c;
}

double entropy(const Vector& sums, double n) {
  double h = 0.0;
  for (Index i = 0; i < sums.size(); ++i) {
    if (sums[i] > 0.0) h -= (sums[i] / n) * std::log(sums[i] / n);
  }
  return h;
}

double comb2(double x) { return x * (x - 1.0) / 2.0; }

}  // namespace

std::vector<int> solve_assignment(const Matrix& cost) {
  // Jonker-style potentials formulation with 1-based sentinels.
  const Index n = cost.rows();
  if (cost.cols() != n) throw std::invalid_argument("assignment needs a square cost matrix");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<Index> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (Index i = 1; i <= n; ++i) {
    p[0] = i;
    Index j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const Index i0 = p[j0];
      double delta = inf;
      Index j1 = 0;
      for (Index j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (Index j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const Index j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assignment(static_cast<std::size_t>(n), -1);
  for (Index j = 1; j <= n; ++j) {
    if (p[j] != 0) assignment[p[j] - 1] = static_cast<int>(j - 1);
  }
  return assignment;
}

double clustering_accuracy(std::span<const int> predicted, std::span<const int> truth) {
  const Contingency c = contingency(predicted, truth);
  const Index m = std::max(c.counts.rows(), c.counts.cols());
  Matrix cost = Matrix::Zero(m, m);
  cost.topLeftCorner(c.counts.rows(), c.counts.cols()) = -c.counts;
  const auto match = solve_assignment(cost);
  double correct = 0.0;
  for (Index r = 0; r < c.counts.rows(); ++r) {
    if (match[r] < c.counts.cols()) correct += c.counts(r, match[r]);
  }
  return correct / c.n;
}

double nmi(std::span<const int> predicted, std::span<const int> truth,
           NmiNormalization normalization) {
  const Contingency c = contingency(predicted, truth);
  const double hp = entropy(c.row_sums, c.n);
  const double ht = entropy(c.col_sums, c.n);
  if (hp == 0.0 && ht == 0.0) return 1.0;
  double mi = 0.0;
  for (Index r = 0; r < c.counts.rows(); ++r) {
    for (Index t = 0; t < c.counts.cols(); ++t) {
      const double nij = c.counts(r, t);
      if (nij == 0.0) continue;
      mi += (nij / c.n) * std::log(c.n * nij / (c.row_sums[r] * c.col_sums[t]));
    }
  }
  const double denom =
      normalization == NmiNormalization::arithmetic ? 0.5 * (hp + ht) : std::sqrt(hp * ht);
  if (denom == 0.0) return 0.0;
  return std::clamp(mi / denom, 0.0, 1.0);
}

double ari(std::span<const int> predicted, std::span<const int> truth) {
  const Contingency c = contingency(predicted, truth);
  double index = 0.0;
  for (Index r = 0; r < c.counts.rows(); ++r) {
    for (Index t = 0; t < c.counts.cols(); ++t) index += comb2(c.counts(r, t));
  }
  double a = 0.0;
  double b = 0.0;
  for (Index r = 0; r < c.row_sums.size(); ++r) a += comb2(c.row_sums[r]);
  for (Index t = 0; t < c.col_sums.size(); ++t) b += comb2(c.col_sums[t]);
  const double pairs = comb2(c.n);
  const double expected = pairs > 0.0 ? a * b / pairs : 0.0;
  const double maximum = 0.5 * (a + b);
  if (maximum == expected) return 1.0;
  return (index - expected) / (maximum - expected);
}

MetricReport evaluate_clustering(std::span<const int> predicted, std::span<const int> truth) {
  return {clustering_accuracy(predicted, truth), nmi(predicted, truth), ari(predicted, truth),
          static_cast<Index>(truth.size())};
}

std::string to_json(const MetricReport& report) {
  nlohmann::json j{{"acc", report.acc}, {"nmi", report.nmi}, {"ari", report.ari},
                   {"n", report.n}};
  return j.dump(2);
}

}  // namespace ncagc
