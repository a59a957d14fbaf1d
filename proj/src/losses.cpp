#include "ncagc/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ncagc {
namespace {

template <typename Range>
double log_sum_exp(const Eigen::Ref<const RowVector>& row, const Range& indices) {
  double peak = -std::numeric_limits<double>::infinity();
  for (const Index j : indices) peak = std::max(peak, row[j]);
  double total = 0.0;
  for (const Index j : indices) total += std::exp(row[j] - peak);
  return peak + std::log(total);
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError(std::string(what) + ": shape mismatch (" + std::to_string(a.rows()) +
                          "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                          "x" + std::to_string(b.cols()) + ")");
  }
}

}  // namespace

double reconstruction_loss(const Matrix& attributes, const Matrix& reconstruction,
                           Matrix* grad_reconstruction) {
  require_same_shape(attributes, reconstruction, "reconstruction loss");
  const Matrix diff = reconstruction - attributes;
  if (grad_reconstruction != nullptr) *grad_reconstruction = diff;
  return 0.5 * diff.squaredNorm();
}

double neighborhood_contrast_loss(const Matrix& latent, const PositiveMask& positives,
                                  Matrix* grad_latent, const ContrastOptions& options) {
  const Index n = latent.rows();
  if (positives.num_nodes() != n) {
    throw ValidationError("positive mask covers " + std::to_string(positives.num_nodes()) +
                          " nodes, latent has " + std::to_string(n));
  }
  if (n < 2) throw ValidationError("neighbourhood contrast needs at least two nodes");

  Vector norms;
  const Matrix unit = normalize_rows(latent, &norms);
  const Matrix sim = (unit * unit.transpose()) / options.temperature;
  Matrix grad_sim;
  if (grad_latent != nullptr) grad_sim = Matrix::Zero(n, n);

  double loss = 0.0;
  std::vector<Index> denominator;
  denominator.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const auto& pos = positives.positives(i);
    if (pos.empty()) continue;
    denominator.clear();
    for (Index p = 0; p < n; ++p) {
      if (p == i) continue;
      if (options.exclude_positives_from_denominator && positives.contains(i, p)) continue;
      denominator.push_back(p);
    }
    if (denominator.empty()) continue;
    const auto row = sim.row(i);
    const double lse_pos = log_sum_exp(row, pos);
    const double lse_all = log_sum_exp(row, denominator);
    loss += lse_all - lse_pos;
    if (grad_latent != nullptr) {
      for (const Index p : denominator) grad_sim(i, p) += std::exp(row[p] - lse_all);
      for (const Index j : pos) grad_sim(i, j) -= std::exp(row[j] - lse_pos);
    }
  }
  if (grad_latent != nullptr) {
    const Matrix grad_unit = ((grad_sim + grad_sim.transpose()) * unit) / options.temperature;
    *grad_latent += normalize_rows_backward(unit, norms, grad_unit);
  }
  return loss;
}

double contrastive_self_expression_loss(const Matrix& latent, const Matrix& expressed,
                                        Matrix* grad_latent, Matrix* grad_expressed,
                                        const ContrastOptions& options) {
  require_same_shape(latent, expressed, "contrastive self-expression loss");
  const Index n = latent.rows();
  Vector z_norms;
  Vector e_norms;
  const Matrix z_unit = normalize_rows(latent, &z_norms);
  const Matrix e_unit = normalize_rows(expressed, &e_norms);
  const Matrix sim = (z_unit * e_unit.transpose()) / options.temperature;

  const bool want_grad = grad_latent != nullptr || grad_expressed != nullptr;
  Matrix grad_sim;
  if (want_grad) grad_sim.resize(n, n);

  double loss = 0.0;
  for (Index i = 0; i < n; ++i) {
    const auto row = sim.row(i);
    const double peak = row.maxCoeff();
    const double lse = peak + std::log((row.array() - peak).exp().sum());
    loss += lse - row[i];
    if (want_grad) {
      grad_sim.row(i) = (row.array() - lse).exp().matrix();
      grad_sim(i, i) -= 1.0;
    }
  }
  if (grad_latent != nullptr) {
    const Matrix g = (grad_sim * e_unit) / options.temperature;
    *grad_latent += normalize_rows_backward(z_unit, z_norms, g);
  }
  if (grad_expressed != nullptr) {
    const Matrix g = (grad_sim.transpose() * z_unit) / options.temperature;
    *grad_expressed += normalize_rows_backward(e_unit, e_norms, g);
  }
  return loss;
}

double plain_self_expression_loss(const Matrix& latent, const Matrix& expressed,
                                  Matrix* grad_latent, Matrix* grad_expressed) {
  require_same_shape(latent, expressed, "self-expression loss");
  const Matrix diff = latent - expressed;
  if (grad_latent != nullptr) *grad_latent += 2.0 * diff;
  if (grad_expressed != nullptr) *grad_expressed -= 2.0 * diff;
  return diff.squaredNorm();
}

LossBreakdown total_loss(double rec, double nbr, double cse, double coef,
                         const LossWeights& weights) {
  const std::pair<const char*, double> parts[] = {
      {"rec", rec}, {"nbr", nbr}, {"cse", cse}, {"coef", coef}};
  for (const auto& [name, value] : parts) {
    if (!std::isfinite(value)) {
      throw NumericalError(std::string("non-finite ") + name + " loss");
    }
  }
  LossBreakdown out{rec, nbr, cse, coef, 0.0, weights};
  out.total = rec + weights.nbr * nbr + weights.cse * cse + weights.coef * coef;
  return out;
}

}  // namespace ncagc
