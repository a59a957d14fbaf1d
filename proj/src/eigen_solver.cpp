#include "ncagc/eigen_solver.hpp"

#include <lapacke.h>

#include <vector>

namespace ncagc {

EigenPairs symmetric_eigenpairs(const Matrix& symmetric, Index first, Index last) {
  const Index n = symmetric.rows();
  if (symmetric.cols() != n) throw std::invalid_argument("eigensolver needs a square matrix");
  if (first < 0 || last >= n || first > last) {
    throw std::invalid_argument("eigenpair index range out of bounds");
  }
  if (!symmetric.allFinite()) throw NumericalError("eigensolver input contains NaN or Inf");

  // dsyevr overwrites its input.
  Matrix work = symmetric;
  const Index count = last - first + 1;
  Vector values(n);
  Matrix vectors(n, count);
  std::vector<lapack_int> support(static_cast<std::size_t>(2 * count));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dsyevr(
      LAPACK_ROW_MAJOR, 'V', 'I', 'U', static_cast<lapack_int>(n), work.data(),
      static_cast<lapack_int>(n), 0.0, 0.0, static_cast<lapack_int>(first + 1),
      static_cast<lapack_int>(last + 1), 0.0, &found, values.data(), vectors.data(),
      static_cast<lapack_int>(count), support.data());
  if (info != 0 || found != count) {
    throw NumericalError("symmetric eigensolver failed (info=" + std::to_string(info) + ")");
  }
  return {values.head(count), std::move(vectors)};
}

}  // namespace ncagc
