#pragma once

#include "dicke/core.hpp"
#include "dicke/moments.hpp"
#include "dicke/separable.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <vector>

namespace dicke {

struct Cutoffs {
  int photon = 30;
  int atom = 30;
};

/**
 * @brief H = omega a'a + omega_b b'b + squeeze (b+b')^2 + coupling (a+a')(b+b') + constant.
 *
 * Normal phase: omega_b = omega0, squeeze = 0, coupling = lambda, constant = -N omega0/2.
 * Superradiant phase: the displaced-frame coefficients with the mean-field
 * energy -(N/omega)(lambda^2 + lambda_c^4/lambda^2) as constant.
 */
struct QuadraticCoefficients {
  double omega = 0.0;
  double omega_b = 0.0;
  double squeeze = 0.0;
  double coupling = 0.0;
  double constant = 0.0;
};

QuadraticCoefficients effective_coefficients(const ModelParams& params, Phase phase);

// Mean-field shift of mode b: sqrt(N (1 - lambda_c^2/lambda^2) / 2) above lambda_c, else 0.
double atom_displacement(const ModelParams& params, Phase phase);

/**
 * @brief Truncated effective Hamiltonian on |m>_a (x) |k>_b, index m * cutoffs.atom + k.
 */
struct EffectiveHamiltonian {
  ModelParams params;
  Phase phase = Phase::Normal;
  Cutoffs cutoffs;
  QuadraticCoefficients coefficients;
  Eigen::SparseMatrix<double> matrix;

  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(matrix); }
  int dimension() const { return cutoffs.photon * cutoffs.atom; }
};

// Throws InvalidParameter when phase disagrees with lambda vs lambda_c or a cutoff is below 8.
EffectiveHamiltonian effective_hamiltonian(const ModelParams& params, Phase phase, Cutoffs cutoffs);

struct TwoModeState {
  Cutoffs cutoffs;
  Eigen::VectorXd amplitudes;  // index m * cutoffs.atom + k, in the displaced frame above lambda_c
  double ground_energy = 0.0;
  double displacement_atom = 0.0;
  Phase phase = Phase::Normal;
  int n_atoms = 1;

  double amplitude(int m, int k) const { return amplitudes[m * cutoffs.atom + k]; }
  // Amplitudes as a (photon x atom) matrix.
  Eigen::MatrixXd as_matrix() const;
};

// Above this even-parity block dimension the sparse shift-invert route is used.
inline constexpr int kDenseBlockLimit = 1300;

/**
 * @brief Lowest eigenvector, positive first significant component.
 *
 * The Hamiltonian conserves (-1)^(m+k) and the ground state is even, so only
 * the even block is solved.  Throws Cutoff (field "photon" or "atom") when the
 * top 10% of either mode carries probability >= 1e-8.
 */
TwoModeState ground_state(const EffectiveHamiltonian& h);

struct ZeroTempOptions {
  Cutoffs cutoffs{30, 30};
  bool escalate = true;
  int max_cutoff = 600;  // escalation stops here
};

// effective_hamiltonian + ground_state, raising the offending cutoff by 1.5x on tail failures.
TwoModeState solve_ground_state(const ModelParams& params, const ZeroTempOptions& options = {});

struct PolaritonFrequencies {
  double omega_minus;
  double omega_plus;
};

PolaritonFrequencies polariton_frequencies(const ModelParams& params);
PolaritonFrequencies normal_mode_frequencies(const QuadraticCoefficients& c);
// Exact ground energy of the untruncated quadratic form.
double quadratic_ground_energy(const QuadraticCoefficients& c);

// Lowest `count` eigenvalues of the truncated matrix (both parities).
std::vector<double> low_spectrum(const EffectiveHamiltonian& h, int count);

/**
 * @brief P(n) for the physical HP mode b, n = 0 .. size-1.
 *
 * Above lambda_c the displaced-frame amplitudes are mapped back through the
 * displacement operator, so P extends beyond cutoffs.atom.
 */
std::vector<double> atom_diagonal_probabilities(const TwoModeState& state);

// Tr[rho_b^2] from the photon-traced matrix.
double reduced_atom_purity(const TwoModeState& state);
// Eigenvalues of rho_b, descending; an independent route to the purity.
std::vector<double> reduced_atom_spectrum(const TwoModeState& state);

// sum_n exp(log_weight(sep, n)) P(n); throws Cutoff when the weights have mass > 1e-12 beyond P.
double overlap_zero_t(const TwoModeState& state, const SeparableState& sep);

// 2^{3/2}(1-4l^2)^{1/4} / [1 + 3 sqrt(1-4l^2) + (sqrt(1+2l) + sqrt(1-2l))^3 / 2]; domain [0, 1/2).
double closed_form_overlap_normal(double lambda);

struct ScalingFit {
  double slope;                  // plain least-squares slope
  double slope_stderr;
  double intercept;
  std::vector<double> residuals;
  double exponent;               // leading exponent with correction-to-scaling terms
  double exponent_stderr;
  int correction_order;          // number of terms sqrt(t), t, t^{3/2}, ... with t = 1 - lambda/lambda_c
  std::vector<double> corrected_residuals;
};

/**
 * @brief Fit -ln Delta against u = -ln(1 - lambda/lambda_c).
 *
 * slope is the straight-line fit.  exponent is the coefficient of u in
 * -ln Delta = p u + c0 + sum_{j=1..K} c_j t^{j/2}, which removes the
 * analytic corrections that bias the straight line away from the critical
 * point; K is reduced when there are too few points.
 */
ScalingFit scaling_fit(const std::vector<double>& lambda_grid, const std::vector<double>& delta_values,
                       double lambda_c = 0.5, int correction_order = 3);

enum class BranchConvention {
  SymmetryBroken,   // one displaced branch, <J_x> != 0 above lambda_c
  ParitySymmetric,  // equal mixture of both branches, as in the parity-conserving exact ground state
};

/**
 * @brief Collective moments through J_z = b'b - N/2, J_+ = b' sqrt(N - b'b).
 *
 * Throws Cutoff when retained atom levels exceed n = N (normal phase) or when
 * the physical distribution has mass > 1e-10 above n = N (superradiant phase).
 */
MomentSet collective_moments_zero_t(const TwoModeState& state, const ModelParams& params,
                                    BranchConvention convention = BranchConvention::SymmetryBroken);

struct ZeroTempPoint {
  ModelParams params;
  Phase phase = Phase::Normal;
  double jz_mean_field = 0.0;  // order_parameter_zero_t
  double jz_state = 0.0;       // (sum_n n P(n) - N/2)/N
  double a = 0.0;
  double delta = 0.0;
  double purity = 0.0;
  double ground_energy = 0.0;
  Cutoffs cutoffs_used;
};

// Delta for one N from an already solved state (the state depends on N only through the displacement).
ZeroTempPoint evaluate_zero_t(const ModelParams& params, const TwoModeState& state);
ZeroTempPoint evaluate_zero_t(const ModelParams& params, const ZeroTempOptions& options = {});

}  // namespace dicke
