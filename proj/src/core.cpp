#include "dicke/core.hpp"

#include "dicke/errors.hpp"
#include "dicke/numerics.hpp"

#include <cmath>

namespace dicke {

void ModelParams::validate() const {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw Error(ErrorKind::InvalidParameter, "omega must be > 0", "omega");
  if (!(omega0 > 0.0) || !std::isfinite(omega0))
    throw Error(ErrorKind::InvalidParameter, "omega0 must be > 0", "omega0");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw Error(ErrorKind::InvalidParameter, "lambda must be >= 0", "lambda");
  if (n_atoms < 1) throw Error(ErrorKind::InvalidParameter, "n_atoms must be >= 1", "n_atoms");
}

std::string_view to_string(Phase phase) { return phase == Phase::Normal ? "normal" : "superradiant"; }

double critical_coupling(double omega, double omega0) {
  if (!(omega > 0.0)) throw Error(ErrorKind::InvalidParameter, "omega must be > 0", "omega");
  if (!(omega0 > 0.0)) throw Error(ErrorKind::InvalidParameter, "omega0 must be > 0", "omega0");
  return std::sqrt(omega * omega0) / 2.0;
}

double critical_coupling(const ModelParams& params) { return critical_coupling(params.omega, params.omega0); }

double critical_temperature_residual(const ModelParams& p, double beta) {
  const double lam2 = p.lambda * p.lambda;
  return beta - p.omega0 / (2.0 * lam2) * std::tanh(beta * p.omega / 2.0) / std::tanh(beta * p.omega0 / 2.0);
}

std::optional<double> critical_temperature(const ModelParams& params) {
  params.validate();
  if (params.lambda == 0.0) return std::nullopt;
  constexpr double lo = 1e-6, hi = 1e3;
  auto g = [&](double b) { return critical_temperature_residual(params, b); };
  const double glo = g(lo), ghi = g(hi);
  if ((glo > 0.0) == (ghi > 0.0) && glo != 0.0 && ghi != 0.0) return std::nullopt;
  return 1.0 / numerics::find_root(g, {lo, hi});
}

double critical_temperature_reduced(const ModelParams& params) {
  params.validate();
  return 2.0 * params.lambda * params.lambda / params.omega0;
}

std::optional<double> critical_temperature_standard(const ModelParams& params) {
  params.validate();
  const double lc = critical_coupling(params);
  if (params.lambda <= lc) return std::nullopt;
  const double ratio = lc * lc / (params.lambda * params.lambda);
  return params.omega0 / (2.0 * std::atanh(ratio));
}

double order_parameter_zero_t(const ModelParams& params) {
  params.validate();
  const double lc = critical_coupling(params);
  if (params.lambda <= lc) return -0.5;
  return -lc * lc / (2.0 * params.lambda * params.lambda);
}

Phase classify_phase(const ModelParams& params, double temperature) {
  params.validate();
  if (!(temperature >= 0.0)) throw Error(ErrorKind::InvalidParameter, "temperature must be >= 0", "temperature");
  const double lc = critical_coupling(params);
  if (params.lambda <= lc) return Phase::Normal;
  if (temperature == 0.0) return Phase::Superradiant;
  const auto tc = critical_temperature(params);
  if (!tc || temperature > *tc) return Phase::Normal;
  return Phase::Superradiant;
}

}  // namespace dicke
