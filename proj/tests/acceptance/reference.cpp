#include "reference.hpp"

#include <algorithm>
#include <cmath>

namespace acceptance_ref {

dicke::MomentSet dicke_state(int n_atoms, double m) {
  const double n = n_atoms;
  const double j = n / 2.0;
  const double perp = 0.5 * (j * (j + 1.0) - m * m);
  dicke::MomentSet out;
  out.n_atoms = n_atoms;
  out.first = {0.0, 0.0, m / n};
  out.second = {perp / (n * n), perp / (n * n), m * m / (n * n)};
  return out;
}

double critical_temperature(double omega, double omega0, double lambda) {
  auto g = [&](double beta) {
    return beta - omega0 / (2.0 * lambda * lambda) * std::tanh(beta * omega / 2.0) / std::tanh(beta * omega0 / 2.0);
  };
  double lo = 1e-8, hi = 1e4;
  for (int i = 0; i < 300; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((g(mid) < 0.0) == (g(lo) < 0.0)) lo = mid;
    else hi = mid;
  }
  return 2.0 / (lo + hi);
}

int ground_cutoff(double omega, double omega0, double lambda, int n_atoms) {
  const double lc2 = omega * omega0 / 4.0;
  double photons = 0.0;
  if (lambda * lambda > lc2) {
    const double mu = lc2 / (lambda * lambda);
    photons = lambda * lambda * n_atoms * (1.0 - mu * mu) / (omega * omega);
  }
  return std::max(30, static_cast<int>(std::ceil(photons + 6.0 * std::sqrt(photons + 1.0) + 24.0)));
}

}  // namespace acceptance_ref
