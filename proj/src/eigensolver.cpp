#include "dicke/errors.hpp"
#include "dicke/numerics.hpp"

#include <lapacke.h>

#include <string>
#include <vector>

namespace dicke::numerics {

EigenDecomposition symmetric_eigendecomposition(const Eigen::MatrixXd& matrix, int count) {
  const lapack_int n = static_cast<lapack_int>(matrix.rows());
  if (matrix.cols() != matrix.rows()) throw Error(ErrorKind::InvalidInput, "matrix is not square");
  if (n == 0) return {};
  if (count < 0 || count > n) count = 0;

  Eigen::MatrixXd a = matrix;  // dsyevr destroys its input
  const bool partial = count > 0 && count < n;
  const lapack_int want = partial ? count : n;
  Eigen::VectorXd w(n);
  Eigen::MatrixXd z(n, want);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(want));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', partial ? 'I' : 'A', 'L', n, a.data(), n, 0.0,
                                         0.0, 1, want, 0.0, &found, w.data(), z.data(), n, isuppz.data());
  if (info != 0 || found != want)
    throw Error(ErrorKind::Numerical, "dsyevr failed with info=" + std::to_string(info));
  return {w.head(want), z};
}

}  // namespace dicke::numerics
