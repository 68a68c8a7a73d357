#pragma once

#include <Eigen/Dense>

namespace dicke::detail {

// U(n, k) = <n|D(beta)|k> for real beta, 0 <= n < rows, 0 <= k < cols.
Eigen::MatrixXd displacement_matrix(double beta, int rows, int cols);

// Number of physical levels needed to hold cutoff displaced levels.
int physical_atom_levels(double beta, int cutoff);

}  // namespace dicke::detail
