#pragma once

#include <optional>
#include <string_view>

namespace dicke {

/** @brief Dicke Hamiltonian parameters in units hbar = k_B = 1. */
struct ModelParams {
  double omega = 1.0;   // field frequency
  double omega0 = 1.0;  // atomic splitting
  double lambda = 0.0;  // coupling
  int n_atoms = 1;

  void validate() const;
};

enum class Phase { Normal, Superradiant };

std::string_view to_string(Phase phase);

// sqrt(omega * omega0) / 2
double critical_coupling(double omega, double omega0);
double critical_coupling(const ModelParams& params);

/**
 * @brief Critical temperature from beta = omega0/(2 lambda^2) tanh(beta omega/2)/tanh(beta omega0/2).
 *
 * The root is bracketed on beta in [1e-6, 1e3]; returns nullopt when the
 * residual does not change sign there (e.g. lambda = 0).
 */
std::optional<double> critical_temperature(const ModelParams& params);

// beta - omega0/(2 lambda^2) tanh(beta omega/2)/tanh(beta omega0/2)
double critical_temperature_residual(const ModelParams& params, double beta);

// 2 lambda^2 / omega0, the omega = omega0 reduction used for plot overlays.
double critical_temperature_reduced(const ModelParams& params);

// Solution of tanh(omega0/(2T)) = lambda_c^2/lambda^2; nullopt for lambda <= lambda_c.
std::optional<double> critical_temperature_standard(const ModelParams& params);

// <J_z>/N of the mean-field ground state: -1/2 below lambda_c, -lambda_c^2/(2 lambda^2) above.
double order_parameter_zero_t(const ModelParams& params);

// temperature == 0 selects the ground-state classification.
Phase classify_phase(const ModelParams& params, double temperature);

}  // namespace dicke
