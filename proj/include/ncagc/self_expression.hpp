#pragma once

#include <string>

#include "ncagc/types.hpp"

namespace ncagc {

inline constexpr double kSelfExpressionInit = 1e-4;

/// Trainable N x N self-expression coefficients.
///
/// Entry (j, i) is the weight of node j in the reconstruction of node i,
/// so in node-major layout the self-expressed representations are
/// C_eff^T * Z, the row-wise counterpart of a column-major Z C. The diagonal
/// is ignored at every point of use.
struct SelfExpressionMatrix {
  Matrix coefficients;

  Index size() const { return coefficients.rows(); }
  /// Coefficients with the diagonal zeroed.
  Matrix effective() const;
};

enum class CoefNorm { squared_frobenius, frobenius };

/// Every entry set to 1e-4. Throws ValidationError for N < 2.
SelfExpressionMatrix init_self_expression(Index num_nodes);

/// zhat_i = sum_{j != i} C(j, i) z_j.
Matrix self_express(const Matrix& latent, const SelfExpressionMatrix& c);

/// Given dL/d(zhat), accumulates dL/dZ and dL/dC (diagonal left untouched).
void self_express_backward(const Matrix& grad_zhat, const Matrix& latent,
                           const SelfExpressionMatrix& c, Matrix& grad_latent,
                           Matrix& grad_coefficients);

/// ||C_eff||_F^2 by default; ||C_eff||_F with CoefNorm::frobenius.
double coef_regularizer(const SelfExpressionMatrix& c,
                        CoefNorm norm = CoefNorm::squared_frobenius);

/// Gradient of coef_regularizer with respect to C (zero diagonal).
Matrix coef_regularizer_grad(const SelfExpressionMatrix& c,
                             CoefNorm norm = CoefNorm::squared_frobenius);

std::string to_string(CoefNorm norm);
CoefNorm parse_coef_norm(const std::string& text);

}  // namespace ncagc
