#pragma once

#include "ncagc/types.hpp"

namespace ncagc {

/// a.b / (|a| |b|); 0 when either vector has zero norm.
double cosine_similarity(const Eigen::Ref<const RowVector>& a,
                         const Eigen::Ref<const RowVector>& b);

/// Rows scaled to unit norm; zero rows stay zero. `norms` receives the
/// original row norms when non-null.
Matrix normalize_rows(const Matrix& m, Vector* norms = nullptr);

/// S(i, j) = cosine_similarity(a.row(i), b.row(j)).
Matrix cosine_similarity_matrix(const Matrix& a, const Matrix& b);

/// Backpropagates through normalize_rows: given dL/d(normalized) returns
/// dL/d(original). Zero rows receive zero gradient.
Matrix normalize_rows_backward(const Matrix& normalized, const Vector& norms,
                               const Matrix& grad_normalized);

}  // namespace ncagc
