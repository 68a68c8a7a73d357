#include "dicke/thermal.hpp"

#include "dicke/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dicke {

namespace {

double coth_half(const ThermalPoint& p) { return 1.0 / std::tanh(0.5 * p.beta * p.params.omega); }

// -x^2/2 + N ln(2 cosh(beta eps))
numerics::LogIntegrand partition_integrand(const ThermalPoint& p) {
  return [p](double x) {
    return -0.5 * x * x + p.params.n_atoms * numerics::log_two_cosh(p.beta * conditional_splitting(p, x));
  };
}

}  // namespace

void ThermalPoint::validate() const {
  params.validate();
  if (!(beta > 0.0) || !std::isfinite(beta * std::max(params.omega, params.omega0)))
    throw Error(ErrorKind::InvalidParameter, "beta must be positive and finite", "beta");
}

double conditional_splitting(const ThermalPoint& p, double x) {
  const double w0 = p.params.omega0;
  return std::sqrt(0.25 * w0 * w0 + x * x * p.params.lambda * p.params.lambda * coth_half(p) / p.params.n_atoms);
}

double log_partition(const ThermalPoint& point, const QuadratureSpec& quad) {
  point.validate();
  const auto r = numerics::log_integral(partition_integrand(point), quad);
  return r.log_value - 0.5 * std::log(2.0 * std::numbers::pi) - std::log(-std::expm1(-point.beta * point.params.omega));
}

double thermal_jz(const ThermalPoint& point, const QuadratureSpec& quad) {
  point.validate();
  const numerics::LogWeightedIntegrator w(partition_integrand(point), quad);
  const double w0 = point.params.omega0;
  const double sz = w.average([&](double x) {
    const double e = conditional_splitting(point, x);
    return -w0 / (2.0 * e) * std::tanh(point.beta * e);
  });
  return 0.5 * sz;
}

double overlap_finite_t(const ThermalPoint& point, double a, const QuadratureSpec& quad, OverlapForm form) {
  point.validate();
  if (!(a >= 0.0 && a <= 1.0)) throw Error(ErrorKind::InvalidParameter, "a must lie in [0, 1]", "a");
  const double w0 = point.params.omega0;
  const int n = point.params.n_atoms;
  const double cosh_weight = form == OverlapForm::Corrected ? 0.5 : 1.0;
  // f = cosh_weight (2 cosh y) + c sinh y = e^y (2 cosh_weight + c)/2 + e^{-y} (2 cosh_weight - c)/2
  auto log_f = [&](double x) {
    const double e = conditional_splitting(point, x);
    const double y = point.beta * e;
    const double c = (1.0 - 2.0 * a) * w0 / (2.0 * e);
    const double inner = 0.5 * (2.0 * cosh_weight + c) + 0.5 * (2.0 * cosh_weight - c) * std::exp(-2.0 * y);
    if (!(inner > 0.0)) throw Error(ErrorKind::Internal, "per-atom overlap factor is not positive");
    return y + std::log(inner);
  };
  const auto num = numerics::log_integral([&](double x) { return -0.5 * x * x + n * log_f(x); }, quad);
  const auto den = numerics::log_integral(partition_integrand(point), quad);
  return std::exp(num.log_value - den.log_value);
}

MomentSet thermal_moments(const ThermalPoint& point, const QuadratureSpec& quad) {
  point.validate();
  const numerics::LogWeightedIntegrator w(partition_integrand(point), quad);
  const auto& p = point.params;
  const double nn = p.n_atoms;
  const double xscale = p.lambda * std::sqrt(coth_half(point)) / std::sqrt(nn);
  auto sz = [&](double x) {
    const double e = conditional_splitting(point, x);
    return -p.omega0 / (2.0 * e) * std::tanh(point.beta * e);
  };
  auto sx = [&](double x) {
    const double e = conditional_splitting(point, x);
    return -xscale * x / e * std::tanh(point.beta * e);
  };
  const double ez = w.average(sz);
  const double ex = w.average(sx);
  const double ez2 = w.average([&](double x) { return sz(x) * sz(x); });
  const double ex2 = w.average([&](double x) { return sx(x) * sx(x); });

  MomentSet m;
  m.n_atoms = p.n_atoms;
  m.first = {0.5 * ex, 0.0, 0.5 * ez};
  auto second = [&](double mean_sq) { return (nn / 4.0 + nn * (nn - 1.0) / 4.0 * mean_sq) / (nn * nn); };
  m.second = {second(ex2), second(0.0), second(ez2)};
  return m;
}

FiniteTPoint evaluate_finite_t(const ThermalPoint& point, const QuadratureSpec& quad) {
  point.validate();
  FiniteTPoint r;
  r.point = point;
  r.phase = classify_phase(point.params, point.temperature());
  r.jz = thermal_jz(point, quad);
  r.a = std::clamp(0.5 + r.jz, 0.0, 1.0);
  r.delta = overlap_finite_t(point, r.a, quad, OverlapForm::Corrected);
  r.delta_printed = overlap_finite_t(point, r.a, quad, OverlapForm::Printed);
  r.log_z = log_partition(point, quad);
  r.low_temperature = point.temperature() < kLowTemperatureLimit;
  return r;
}

}  // namespace dicke
