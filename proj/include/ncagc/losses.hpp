#pragma once

#include "ncagc/knn.hpp"
#include "ncagc/similarity.hpp"
#include "ncagc/types.hpp"

namespace ncagc {

struct LossWeights {
  double nbr = 10.0;
  double cse = 10.0;
  double coef = 10.0;
};

struct LossBreakdown {
  double rec = 0.0;
  double nbr = 0.0;
  double cse = 0.0;
  double coef = 0.0;
  double total = 0.0;
  LossWeights weights;
};

struct ContrastOptions {
  /// Similarities are divided by this before exponentiation.
  double temperature = 1.0;
  /// Neighbourhood contrast only: drop the positives from the denominator.
  bool exclude_positives_from_denominator = false;
};

/// 0.5 * ||X - Xhat||_F^2. If `grad_reconstruction` is non-null it receives
/// dL/dXhat.
double reconstruction_loss(const Matrix& attributes, const Matrix& reconstruction,
                           Matrix* grad_reconstruction = nullptr);

/// sum_i -log( sum_{j in pos(i)} e^{s_ij} / sum_{p != i} e^{s_ip} ) with
/// cosine similarities of latent rows. The gradient is accumulated (+=)
/// into `grad_latent`, which must already have the latent's shape.
double neighborhood_contrast_loss(const Matrix& latent, const PositiveMask& positives,
                                  Matrix* grad_latent = nullptr,
                                  const ContrastOptions& options = {});

/// sum_i -log( e^{s(z_i, zhat_i)} / sum_j e^{s(z_i, zhat_j)} ); the
/// denominator runs over all j including i. Gradients are accumulated
/// (+=) into the non-null outputs.
double contrastive_self_expression_loss(const Matrix& latent, const Matrix& expressed,
                                        Matrix* grad_latent = nullptr,
                                        Matrix* grad_expressed = nullptr,
                                        const ContrastOptions& options = {});

/// ||Z - Zhat||_F^2, gradients accumulated like the contrastive version.
double plain_self_expression_loss(const Matrix& latent, const Matrix& expressed,
                                  Matrix* grad_latent = nullptr,
                                  Matrix* grad_expressed = nullptr);

/// rec + w.nbr * nbr + w.cse * cse + w.coef * coef. Throws NumericalError
/// naming the first non-finite component.
LossBreakdown total_loss(double rec, double nbr, double cse, double coef,
                         const LossWeights& weights);

}  // namespace ncagc
