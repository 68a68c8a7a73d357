#pragma once

#include "dicke/core.hpp"
#include "dicke/moments.hpp"
#include "dicke/numerics.hpp"

namespace dicke {

using numerics::QuadratureSpec;

struct ThermalPoint {
  ModelParams params;
  double beta = 1.0;

  void validate() const;
  double temperature() const { return 1.0 / beta; }
};

// Below this temperature the high-temperature split behind the integrals is not trusted.
inline constexpr double kLowTemperatureLimit = 0.1;

/**
 * @brief ln z with
 *   z = (2 pi)^{-1/2} / (1 - e^{-beta omega}) int dx e^{-x^2/2} [2 cosh(beta eps(x))]^N,
 *   eps(x) = sqrt(omega0^2/4 + x^2 lambda^2 coth(beta omega/2)/N).
 */
double log_partition(const ThermalPoint& point, const QuadratureSpec& quad = {});

// eps(x) above.
double conditional_splitting(const ThermalPoint& point, double x);

/**
 * @brief <J_z>/N = (1/2) E_w[-(omega0/(2 eps)) tanh(beta eps)] with weight
 * e^{-x^2/2} [2 cosh(beta eps)]^N; the bracket is the single-atom <sigma_z>.
 */
double thermal_jz(const ThermalPoint& point, const QuadratureSpec& quad = {});

enum class OverlapForm {
  Corrected,  // per-atom factor cosh + c sinh
  Printed,    // per-atom factor 2 cosh + c sinh
};

/**
 * @brief Delta = int e^{-x^2/2} f(x)^N / int e^{-x^2/2} [2 cosh(beta eps)]^N,
 * f = cosh(beta eps) + ((1-2a) omega0/(2 eps)) sinh(beta eps) in the corrected form.
 */
double overlap_finite_t(const ThermalPoint& point, double a, const QuadratureSpec& quad = {},
                        OverlapForm form = OverlapForm::Corrected);

/**
 * @brief Moments from conditionally independent atoms given x:
 * <sigma_z>_x = -(omega0/(2 eps)) tanh(beta eps),
 * <sigma_x>_x = -(lambda x sqrt(coth(beta omega/2)) / (sqrt(N) eps)) tanh(beta eps), <sigma_y>_x = 0,
 * <J_k> = (N/2) E_w[<sigma_k>_x], <J_k^2> = N/4 + N(N-1)/4 E_w[<sigma_k>_x^2].
 */
MomentSet thermal_moments(const ThermalPoint& point, const QuadratureSpec& quad = {});

struct FiniteTPoint {
  ThermalPoint point;
  Phase phase = Phase::Normal;
  double jz = 0.0;
  double a = 0.0;
  double delta = 0.0;
  double delta_printed = 0.0;
  double log_z = 0.0;
  bool low_temperature = false;  // T < kLowTemperatureLimit
};

// a = 1/2 + thermal_jz, then both overlap forms.
FiniteTPoint evaluate_finite_t(const ThermalPoint& point, const QuadratureSpec& quad = {});

}  // namespace dicke
