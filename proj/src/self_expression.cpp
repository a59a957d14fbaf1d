#include "ncagc/self_expression.hpp"

#include <cmath>

namespace ncagc {

Matrix SelfExpressionMatrix::effective() const {
  Matrix out = coefficients;
  out.diagonal().setZero();
  return out;
}

SelfExpressionMatrix init_self_expression(Index num_nodes) {
  if (num_nodes < 2) throw ValidationError("self-expression needs at least two nodes");
  return {Matrix::Constant(num_nodes, num_nodes, kSelfExpressionInit)};
}

Matrix self_express(const Matrix& latent, const SelfExpressionMatrix& c) {
  if (c.size() != latent.rows() || c.coefficients.cols() != latent.rows()) {
    throw ValidationError("self-expression matrix is " + std::to_string(c.size()) +
                          " wide but there are " + std::to_string(latent.rows()) + " nodes");
  }
  // Masking before the product keeps the result bitwise independent of the diagonal.
  return c.effective().transpose() * latent;
}

void self_express_backward(const Matrix& grad_zhat, const Matrix& latent,
                           const SelfExpressionMatrix& c, Matrix& grad_latent,
                           Matrix& grad_coefficients) {
  const Matrix effective = c.effective();
  grad_latent.noalias() += effective * grad_zhat;
  Matrix gc = latent * grad_zhat.transpose();
  gc.diagonal().setZero();
  grad_coefficients += gc;
}

double coef_regularizer(const SelfExpressionMatrix& c, CoefNorm norm) {
  double sum = 0.0;
  const Index n = c.size();
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i != j) sum += c.coefficients(i, j) * c.coefficients(i, j);
    }
  }
  return norm == CoefNorm::squared_frobenius ? sum : std::sqrt(sum);
}

Matrix coef_regularizer_grad(const SelfExpressionMatrix& c, CoefNorm norm) {
  Matrix effective = c.effective();
  if (norm == CoefNorm::squared_frobenius) return 2.0 * effective;
  const double f = effective.norm();
  if (f == 0.0) return Matrix::Zero(c.size(), c.size());
  return effective / f;
}

std::string to_string(CoefNorm norm) {
  return norm == CoefNorm::squared_frobenius ? "squared-frobenius" : "frobenius";
}

CoefNorm parse_coef_norm(const std::string& text) {
  if (text == "squared-frobenius" || text == "squared_frobenius") return CoefNorm::squared_frobenius;
  if (text == "frobenius") return CoefNorm::frobenius;
  throw ConfigError("unknown coefficient norm '" + text + "'");
}

}  // namespace ncagc
