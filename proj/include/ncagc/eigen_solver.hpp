#pragma once

#include "ncagc/types.hpp"

namespace ncagc {

/// Eigenvalues in ascending order with matching eigenvector columns.
struct EigenPairs {
  Vector values;
  Matrix vectors;
};

/// Eigenpairs `first..last` (0-based, inclusive, ascending order) of a
/// symmetric matrix. Only the upper triangle is read. Throws NumericalError
/// if the solver does not converge.
EigenPairs symmetric_eigenpairs(const Matrix& symmetric, Index first, Index last);

}  // namespace ncagc
