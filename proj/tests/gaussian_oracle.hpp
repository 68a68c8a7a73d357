#pragma once

// Ground state of a two-mode quadratic Hamiltonian in phase space, used as an
// independent reference for the truncated Fock-space solver.

#include <Eigen/Dense>

#include <cmath>

namespace testref {

struct GaussianGround {
  double energy;
  double omega_minus, omega_plus;
  double vx_b, vp_b;  // <x_b^2>, <p_b^2>; vacuum has 1/2 each

  double vacuum_probability_b() const { return 1.0 / std::sqrt((vx_b + 0.5) * (vp_b + 0.5)); }
  double purity_b() const { return 0.5 / std::sqrt(vx_b * vp_b); }
  double mean_occupation_b() const { return 0.5 * (vx_b + vp_b - 1.0); }
};

/**
 * H = w a'a + wb b'b + s (b+b')^2 + g (a+a')(b+b') + c
 *   = p'Mp/2 + x'Kx/2 - (w + wb)/2 + c,  M = diag(w, wb),  K = [[w, 2g], [2g, wb + 4s]].
 * With A = M^{1/2} K M^{1/2}: <xx'> = M^{1/2} A^{-1/2} M^{1/2}/2, <pp'> = M^{-1/2} A^{1/2} M^{-1/2}/2.
 */
inline GaussianGround gaussian_ground(double w, double wb, double s, double g, double c) {
  Eigen::Matrix2d m_half = Eigen::Vector2d(std::sqrt(w), std::sqrt(wb)).asDiagonal();
  Eigen::Matrix2d k;
  k << w, 2.0 * g, 2.0 * g, wb + 4.0 * s;
  const Eigen::Matrix2d a = m_half * k * m_half;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(a);
  const Eigen::Vector2d freq = es.eigenvalues().cwiseSqrt();
  const Eigen::Matrix2d a_half = es.eigenvectors() * freq.asDiagonal() * es.eigenvectors().transpose();
  const Eigen::Matrix2d a_mhalf = es.eigenvectors() * freq.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
  const Eigen::Matrix2d xx = 0.5 * m_half * a_mhalf * m_half;
  const Eigen::Matrix2d m_mhalf = m_half.inverse();
  const Eigen::Matrix2d pp = 0.5 * m_mhalf * a_half * m_mhalf;
  GaussianGround out;
  out.energy = 0.5 * freq.sum() - 0.5 * (w + wb) + c;
  out.omega_minus = freq.minCoeff();
  out.omega_plus = freq.maxCoeff();
  out.vx_b = xx(1, 1);
  out.vp_b = pp(1, 1);
  return out;
}

}  // namespace testref
