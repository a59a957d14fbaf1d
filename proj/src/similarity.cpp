#include "ncagc/similarity.hpp"

namespace ncagc {

double cosine_similarity(const Eigen::Ref<const RowVector>& a,
                         const Eigen::Ref<const RowVector>& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.dot(b) / (na * nb);
}

Matrix normalize_rows(const Matrix& m, Vector* norms) {
  Matrix out = m;
  Vector row_norms(m.rows());
  for (Index i = 0; i < m.rows(); ++i) {
    row_norms[i] = m.row(i).norm();
    if (row_norms[i] > 0.0) out.row(i) /= row_norms[i];
  }
  if (norms != nullptr) *norms = std::move(row_norms);
  return out;
}

Matrix cosine_similarity_matrix(const Matrix& a, const Matrix& b) {
  const Matrix na = normalize_rows(a);
  const Matrix nb = normalize_rows(b);
  return na * nb.transpose();
}

Matrix normalize_rows_backward(const Matrix& normalized, const Vector& norms,
                               const Matrix& grad_normalized) {
  Matrix grad(normalized.rows(), normalized.cols());
  for (Index i = 0; i < normalized.rows(); ++i) {
    if (norms[i] == 0.0) {
      grad.row(i).setZero();
      continue;
    }
    const double radial = normalized.row(i).dot(grad_normalized.row(i));
    grad.row(i) = (grad_normalized.row(i) - radial * normalized.row(i)) / norms[i];
  }
  return grad;
}

}  // namespace ncagc
