#include "displacement.hpp"

#include <cmath>

namespace dicke::detail {

namespace {

// <n|D(beta)|k> for n >= k, m = n - k:
//   sqrt(k!/n!) beta^m exp(-beta^2/2) L_k^{(m)}(beta^2).
// The Laguerre values are carried with a separate log scale; for large m
// they exceed the double range long before the matrix element does.
void fill_diagonal(Eigen::MatrixXd& u, double beta, int m, bool lower) {
  const int rows = static_cast<int>(u.rows());
  const int cols = static_cast<int>(u.cols());
  const double x = beta * beta;
  const double log_beta = std::log(beta);
  double prev = 0.0, cur = 1.0, log_scale = 0.0;
  for (int k = 0;; ++k) {
    const int n = k + m;
    const int r = lower ? n : k;
    const int c = lower ? k : n;
    if (r >= rows || c >= cols) break;
    if (cur != 0.0) {
      const double log_mag = 0.5 * (std::lgamma(k + 1.0) - std::lgamma(n + 1.0)) + m * log_beta - 0.5 * x +
                             log_scale + std::log(std::abs(cur));
      double v = std::exp(log_mag);
      if (cur < 0.0) v = -v;
      if (!lower && (m % 2 == 1)) v = -v;
      u(r, c) = v;
    } else {
      u(r, c) = 0.0;
    }
    const double next = k == 0 ? 1.0 + m - x : ((2.0 * k + 1.0 + m - x) * cur - (k + m) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
    const double big = std::max(std::abs(prev), std::abs(cur));
    if (big > 1e150) {
      prev /= 1e150;
      cur /= 1e150;
      log_scale += std::log(1e150);
    }
  }
}

}  // namespace

Eigen::MatrixXd displacement_matrix(double beta, int rows, int cols) {
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(rows, cols);
  if (beta == 0.0) {
    for (int i = 0; i < std::min(rows, cols); ++i) u(i, i) = 1.0;
    return u;
  }
  const double b = std::abs(beta);
  for (int m = 0; m < rows; ++m) fill_diagonal(u, b, m, true);
  for (int m = 1; m < cols; ++m) fill_diagonal(u, b, m, false);
  // D(-beta) = P D(beta) P with P = (-1)^n
  if (beta < 0.0)
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c)
        if ((r + c) % 2 == 1) u(r, c) = -u(r, c);
  return u;
}

int physical_atom_levels(double beta, int cutoff) {
  const double s = std::abs(beta) + std::sqrt(static_cast<double>(cutoff)) + 6.0;
  return std::max(cutoff, static_cast<int>(std::ceil(s * s)));
}

}  // namespace dicke::detail
