#pragma once

#include <array>
#include <span>
#include <vector>

namespace dicke {

/**
 * @brief Identical-factor product state rho^s = rho_1^{(x)N}, rho_1 = diag(a, 1-a).
 *
 * Stored only through a, N and the binomial log-weights over the number n of
 * up spins: log_weights[n] = ln[C(N,n) a^n (1-a)^(N-n)].
 */
class SeparableState {
 public:
  static SeparableState from_jz(double jz_per_atom, int n_atoms);
  static SeparableState from_probability(double a, int n_atoms);

  double a() const { return a_; }
  int n_atoms() const { return n_atoms_; }
  const std::vector<double>& log_weights() const { return log_weights_; }

  // Single-atom density matrix in the (up, down) basis.
  std::array<std::array<double, 2>, 2> single_atom_matrix() const;

 private:
  SeparableState(double a, int n_atoms);

  double a_;
  int n_atoms_;
  std::vector<double> log_weights_;
};

// ln[C(N,n) a^n (1-a)^(N-n)]; throws Index for n outside [0, N].
double log_weight(const SeparableState& state, int n);

// ln[a^n (1-a)^(N-n)], the weight of one product configuration with n up spins.
double log_configuration_weight(const SeparableState& state, int n);

// sum_n exp(log_weight(n)) p_n over the common range of n.
double diagonal_overlap(const SeparableState& state, std::span<const double> probs);

struct NearestA {
  double a_jz_matched;
  double a_argmax;
  double overlap_jz_matched;
  double overlap_argmax;
};

/**
 * @brief Both choices of a for a J_z-basis diagonal p_0..p_N.
 *
 * a_jz_matched reproduces <J_z>; a_argmax maximizes sum_n w_n(a) p_n by a
 * 201-point scan followed by golden-section refinement to 1e-8.
 */
NearestA nearest_a(std::span<const double> diagonal_probs);

}  // namespace dicke
