#include "dicke/separable.hpp"

#include "dicke/errors.hpp"
#include "dicke/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dicke {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double raw_log_configuration(double a, int n_atoms, int n) {
  if (a == 0.0) return n == 0 ? 0.0 : kNegInf;
  if (a == 1.0) return n == n_atoms ? 0.0 : kNegInf;
  return n * std::log(a) + (n_atoms - n) * std::log1p(-a);
}

double log_objective(std::span<const double> p, double a) {
  const int n_atoms = static_cast<int>(p.size()) - 1;
  std::vector<double> terms;
  terms.reserve(p.size());
  for (int n = 0; n <= n_atoms; ++n) {
    if (p[n] <= 0.0) continue;
    terms.push_back(numerics::log_binomial(n_atoms, n) + raw_log_configuration(a, n_atoms, n) + std::log(p[n]));
  }
  return numerics::log_sum_exp(terms);
}

}  // namespace

SeparableState::SeparableState(double a, int n_atoms) : a_(a), n_atoms_(n_atoms), log_weights_(n_atoms + 1) {
  for (int n = 0; n <= n_atoms; ++n)
    log_weights_[n] = numerics::log_binomial(n_atoms, n) + raw_log_configuration(a, n_atoms, n);
  // Absorb the lgamma rounding so the weights sum to one.
  const double norm = numerics::log_sum_exp(log_weights_);
  for (auto& w : log_weights_)
    if (w != kNegInf) w -= norm;
}

SeparableState SeparableState::from_probability(double a, int n_atoms) {
  if (n_atoms < 1) throw Error(ErrorKind::InvalidParameter, "n_atoms must be >= 1", "n_atoms");
  if (!(a >= 0.0 && a <= 1.0)) throw Error(ErrorKind::InvalidParameter, "a must lie in [0, 1]", "a");
  return SeparableState(a, n_atoms);
}

SeparableState SeparableState::from_jz(double jz_per_atom, int n_atoms) {
  constexpr double slack = 1e-12;
  if (!(jz_per_atom >= -0.5 - slack && jz_per_atom <= 0.5 + slack))
    throw Error(ErrorKind::InvalidParameter, "jz_per_atom must lie in [-1/2, 1/2]", "jz_per_atom");
  double a = 0.5 + jz_per_atom;
  a = a < 0.0 ? 0.0 : (a > 1.0 ? 1.0 : a);
  return from_probability(a, n_atoms);
}

std::array<std::array<double, 2>, 2> SeparableState::single_atom_matrix() const {
  return {{{a_, 0.0}, {0.0, 1.0 - a_}}};
}

double log_weight(const SeparableState& state, int n) {
  if (n < 0 || n > state.n_atoms())
    throw Error(ErrorKind::Index, "n=" + std::to_string(n) + " outside [0, " + std::to_string(state.n_atoms()) + "]");
  return state.log_weights()[n];
}

double log_configuration_weight(const SeparableState& state, int n) {
  if (n < 0 || n > state.n_atoms())
    throw Error(ErrorKind::Index, "n=" + std::to_string(n) + " outside [0, " + std::to_string(state.n_atoms()) + "]");
  return raw_log_configuration(state.a(), state.n_atoms(), n);
}

double diagonal_overlap(const SeparableState& state, std::span<const double> probs) {
  const std::size_t top = std::min(probs.size(), state.log_weights().size());
  double s = 0.0;
  for (std::size_t n = 0; n < top; ++n) s += std::exp(state.log_weights()[n]) * probs[n];
  return s;
}

NearestA nearest_a(std::span<const double> p) {
  if (p.size() < 2) throw Error(ErrorKind::InvalidDistribution, "need at least two entries (N >= 1)");
  double total = 0.0, mean = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    if (!(p[n] >= -1e-12) || !std::isfinite(p[n]))
      throw Error(ErrorKind::InvalidDistribution, "negative or non-finite entry at n=" + std::to_string(n));
    total += p[n];
    mean += static_cast<double>(n) * p[n];
  }
  if (std::abs(total - 1.0) > 1e-8)
    throw Error(ErrorKind::InvalidDistribution, "probabilities sum to " + std::to_string(total));
  const int n_atoms = static_cast<int>(p.size()) - 1;

  NearestA out{};
  out.a_jz_matched = std::clamp(mean / n_atoms, 0.0, 1.0);

  constexpr int kScan = 200;
  int best = 0;
  double best_val = kNegInf;
  for (int i = 0; i <= kScan; ++i) {
    const double v = log_objective(p, static_cast<double>(i) / kScan);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  double lo = std::max(0, best - 1) / static_cast<double>(kScan);
  double hi = std::min(kScan, best + 1) / static_cast<double>(kScan);
  const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - invphi * (hi - lo), d = lo + invphi * (hi - lo);
  double fc = log_objective(p, c), fd = log_objective(p, d);
  while (hi - lo > 1e-8) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - invphi * (hi - lo);
      fc = log_objective(p, c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + invphi * (hi - lo);
      fd = log_objective(p, d);
    }
  }
  double a_star = 0.5 * (lo + hi);
  // The maximum can sit on the boundary of [0, 1].
  for (double edge : {0.0, 1.0})
    if (log_objective(p, edge) > log_objective(p, a_star)) a_star = edge;
  out.a_argmax = a_star;
  out.overlap_jz_matched = std::exp(log_objective(p, out.a_jz_matched));
  out.overlap_argmax = std::exp(log_objective(p, out.a_argmax));
  return out;
}

}  // namespace dicke
