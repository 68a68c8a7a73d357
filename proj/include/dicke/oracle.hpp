#pragma once

#include "dicke/core.hpp"
#include "dicke/moments.hpp"
#include "dicke/separable.hpp"

#include <Eigen/Dense>

#include <optional>

namespace dicke::oracle {

enum class BasisKind {
  SymmetricSector,  // |m> (x) |j=N/2, n - N/2>, n = number of up spins
  FullProduct,      // |m> (x) |s_1 ... s_N>, bit i of the label set when atom i is up
};

inline constexpr int kMaxFullProductAtoms = 6;
inline constexpr long kMaxSymmetricDimension = 200000;

/** @brief Truncated Hilbert space of the full Dicke model; index m * atom_dim() + s. */
struct DickeBasis {
  BasisKind kind = BasisKind::SymmetricSector;
  int n_atoms = 1;
  int cutoff = 40;  // photon levels

  int atom_dim() const;
  long dim() const;
  // Number of up spins in atom state s.
  int up_count(int s) const;
  // Throws Capacity naming the violated bound.
  void validate() const;
};

// omega a'a + omega0 J_z + (lambda/sqrt(N)) (a' + a)(J_+ + J_-)
Eigen::MatrixXd build_hamiltonian(const ModelParams& params, const DickeBasis& basis);

// Diagonal of Pi = exp[i pi (a'a + J_z + N/2)] = (-1)^(m + n_up).
Eigen::VectorXd parity_diagonal(const DickeBasis& basis);

// max |[H, Pi]_ij|
double parity_commutator_norm(const Eigen::MatrixXd& h, const DickeBasis& basis);

struct OracleState {
  DickeBasis basis;
  Eigen::MatrixXd vectors;  // columns; a single column for a pure state
  Eigen::VectorXd weights;  // mixture weights, summing to one
  Eigen::VectorXd energies;
  std::optional<double> beta;
  double ground_energy = 0.0;
  double log_z = 0.0;       // thermal states: ln sum_k e^{-beta E_k}
  int parity = 1;           // ground states only

  // Photon-traced atomic density matrix, atom_dim() x atom_dim().
  Eigen::MatrixXd atom_density() const;
};

/**
 * @brief Lowest eigenvector in the symmetric sector, solved per parity block.
 *
 * The solve is repeated at 1.5x the photon cutoff; an energy shift of 1e-8 or
 * more raises Cutoff.
 */
OracleState exact_ground_state(const ModelParams& params, int cutoff);

// Ground state without the convergence re-solve, in either basis.
OracleState exact_ground_state_in(const ModelParams& params, const DickeBasis& basis);

// Full eigendecomposition in the FullProduct basis with weights e^{-beta E_k}/Z.
OracleState exact_thermal_state(const ModelParams& params, int cutoff, double beta);

struct OverlapCheck {
  double via_diagonal;  // atomic diagonal x separable weights
  double via_trace;     // Tr[rho_atoms rho^s] with rho^s assembled as a matrix
};

/**
 * @brief Tr[rho_atoms rho^s] two ways; throws Internal when they differ by more than 1e-10.
 *
 * FullProduct: rho^s is the Kronecker power of the single-atom matrix, so each
 * configuration with n up spins carries a^n (1-a)^(N-n).  SymmetricSector:
 * rho^s is represented on Dicke states by the binomial weights C(N,n) a^n (1-a)^(N-n).
 */
OverlapCheck exact_overlap(const OracleState& state, const SeparableState& sep);

// Probability of n up spins, n = 0..N.
Eigen::VectorXd up_count_distribution(const OracleState& state);

MomentSet exact_moments(const OracleState& state);

/**
 * @brief ln Tr[e^{-beta H_0} e^{-beta H_I}] in the FullProduct basis with
 * H_0 = omega a'a and H_I = omega0 J_z + (2 lambda/sqrt(N)) (a + a') J_x.
 */
double split_log_partition(const ModelParams& params, int cutoff, double beta);

}  // namespace dicke::oracle
