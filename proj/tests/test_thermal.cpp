#include "dicke/errors.hpp"
#include "dicke/oracle.hpp"
#include "dicke/thermal.hpp"

#include <doctest.h>

#include <cmath>

using namespace dicke;

namespace {

ThermalPoint at(double lambda, int n, double beta) { return {{1.0, 1.0, lambda, n}, beta}; }

}  // namespace

TEST_CASE("ThermalPoint validation") {
  CHECK_THROWS_AS(at(0.3, 4, 0.0).validate(), Error);
  CHECK_THROWS_AS(at(0.3, 4, -1.0).validate(), Error);
  CHECK_THROWS_AS(at(0.3, 4, INFINITY).validate(), Error);
  CHECK(at(0.3, 4, 0.25).temperature() == 4.0);
}

TEST_CASE("log_partition without coupling") {
  for (double beta : {0.05, 0.7, 3.0, 20.0})
    for (int n : {1, 10, 100}) {
      const auto pt = at(0.0, n, beta);
      const double exact = n * std::log(2.0 * std::cosh(beta / 2.0)) - std::log(1.0 - std::exp(-beta));
      CHECK(log_partition(pt) == doctest::Approx(exact).epsilon(1e-12));
    }
}

TEST_CASE("log_partition self-convergence at N = 100, lambda = 1, beta = 1") {
  const auto pt = at(1.0, 100, 1.0);
  QuadratureSpec base;
  QuadratureSpec doubled = base;
  doubled.max_nodes *= 2;
  QuadratureSpec wide = base;
  wide.window_halfwidth_sigmas = 12.0;
  const double a = log_partition(pt, base);
  CHECK(std::isfinite(a));
  CHECK(std::abs(log_partition(pt, doubled) - a) < base.rel_tol * std::abs(a));
  CHECK(std::abs(log_partition(pt, wide) - a) < base.rel_tol * std::abs(a));
  QuadratureSpec tight = base;
  tight.rel_tol = 1e-13;
  tight.max_nodes = 200000;
  CHECK(std::abs(log_partition(pt, tight) - a) < 1e-9 * std::abs(a));
}

TEST_CASE("log_partition equals the split-operator trace of the oracle") {
  // A photon cutoff of 120 keeps the truncation of e^{-beta omega a'a} far below 1e-6 at beta = 0.2.
  for (double l : {0.5, 1.0}) {
    const double q = log_partition(at(l, 4, 0.2));
    const double split = oracle::split_log_partition({1.0, 1.0, l, 4}, 120, 0.2);
    CHECK(std::abs(q - split) < 1e-6);
  }
}

TEST_CASE("log_partition is convex in beta") {
  // d ln z / d beta = -<E> and d^2 ln z / d beta^2 = Var E >= 0
  for (double l : {0.0, 0.4, 1.0, 1.5}) {
    std::vector<double> v;
    for (double beta = 0.1; beta <= 5.0; beta += 0.1) v.push_back(log_partition(at(l, 100, beta)));
    for (std::size_t k = 1; k + 1 < v.size(); ++k) CHECK(v[k + 1] - 2 * v[k] + v[k - 1] > -1e-8);
  }
}

TEST_CASE("log_partition decreases with beta while the mean energy is positive") {
  // one atom and omega = omega0 = 1: <E> > 0 for beta below about 1.5 at lambda = 0
  for (double l : {0.0, 0.2}) {
    double prev = INFINITY;
    for (double beta = 0.1; beta <= 1.0; beta += 0.1) {
      const double v = log_partition(at(l, 1, beta));
      CHECK(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("thermal_jz limits") {
  for (double beta : {0.1, 1.0, 4.0})
    CHECK(thermal_jz(at(0.0, 10, beta)) == doctest::Approx(-0.5 * std::tanh(beta / 2.0)).epsilon(1e-12));
  // Large beta: only couplings with beta lambda^2 < 1/2 stay on the free branch, up to O(lambda^2/N).
  CHECK(std::abs(thermal_jz(at(0.01, 10, 50.0)) + 0.5) < 1e-4);
  CHECK(std::abs(thermal_jz(at(0.3, 10, 50.0)) + 0.5) > 0.1);
}

TEST_CASE("thermal_jz against the thermal oracle") {
  const auto th = oracle::exact_thermal_state({1.0, 1.0, 1.0, 4}, 40, 0.2);
  const double exact = oracle::exact_moments(th).first[2];
  CHECK(std::abs(thermal_jz(at(1.0, 4, 0.2)) - exact) < 0.02);
}

TEST_CASE("conditional splitting") {
  const auto pt = at(0.8, 10, 0.5);
  CHECK(conditional_splitting(pt, 0.0) == doctest::Approx(0.5));
  const double x = 1.7;
  const double expected = std::sqrt(0.25 + x * x * 0.64 / std::tanh(0.25) / 10.0);
  CHECK(conditional_splitting(pt, x) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("overlap_finite_t without coupling") {
  for (double beta : {0.2, 1.0, 3.0})
    for (int n : {1, 4, 30}) {
      const double ratio = std::exp(beta / 2.0) / (2.0 * std::cosh(beta / 2.0));
      CHECK(overlap_finite_t(at(0.0, n, beta), 0.0) == doctest::Approx(std::pow(ratio, n)).epsilon(1e-11));
    }
  // any a: the per-atom overlap is (1-a) p_down + a p_up
  const double beta = 0.9, a = 0.3;
  const double p_down = std::exp(beta / 2) / (2 * std::cosh(beta / 2));
  CHECK(overlap_finite_t(at(0.0, 6, beta), a) ==
        doctest::Approx(std::pow((1 - a) * p_down + a * (1 - p_down), 6)).epsilon(1e-11));
}

TEST_CASE("overlap tends to 2^-N at high temperature") {
  for (double l : {0.0, 0.5, 1.0}) {
    const auto pt = at(l, 10, 1e-3);
    const double a = 0.5 + thermal_jz(pt);
    const double delta = overlap_finite_t(pt, a);
    CHECK(std::abs(delta * 1024.0 - 1.0) < 1e-2);
  }
}

TEST_CASE("printed form differs from the corrected form") {
  const auto pt = at(0.7, 8, 0.5);
  const double a = 0.5 + thermal_jz(pt);
  const double corrected = overlap_finite_t(pt, a);
  const double printed = overlap_finite_t(pt, a, {}, OverlapForm::Printed);
  CHECK(printed > 1.0);
  CHECK(corrected < 1.0);
  // at a = 1/2 the printed form reduces to Z/Z
  CHECK(overlap_finite_t(pt, 0.5, {}, OverlapForm::Printed) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(overlap_finite_t(pt, 0.5) == doctest::Approx(std::pow(0.5, 8)).epsilon(1e-10));
}

TEST_CASE("overlap_finite_t rejects a outside [0, 1]") {
  CHECK_THROWS_AS(overlap_finite_t(at(0.4, 4, 1.0), 1.5), Error);
  CHECK_THROWS_AS(overlap_finite_t(at(0.4, 4, 1.0), -0.1), Error);
}

TEST_CASE("overlap_finite_t against the thermal oracle at N = 4") {
  for (double l : {0.5, 1.0}) {
    CAPTURE(l);
    double err[3];
    int i = 0;
    for (double beta : {0.1, 0.2, 0.4}) {
      const auto pt = at(l, 4, beta);
      const double a = 0.5 + thermal_jz(pt);
      const double q = overlap_finite_t(pt, a);
      // a generous cutoff so that photon truncation does not mask the split error
      const auto th = oracle::exact_thermal_state(pt.params, 80, beta);
      const double a_exact = 0.5 + oracle::exact_moments(th).first[2];
      const double e = oracle::exact_overlap(th, SeparableState::from_probability(a_exact, 4)).via_diagonal;
      err[i++] = std::abs(q - e) / e;
    }
    CHECK(err[1] < 0.05);
    CHECK(err[0] < err[1]);
    CHECK(err[1] < err[2]);
  }
}

TEST_CASE("overlap bounds on a grid") {
  for (double l = 0.0; l <= 1.5; l += 0.25)
    for (double t = 0.2; t <= 3.0; t += 0.4) {
      const auto r = evaluate_finite_t(at(l, 100, 1.0 / t));
      CHECK(r.delta <= 1.0);
      CHECK(r.delta >= std::pow(2.0, -100) * (1 - 10 * 1e-10));
    }
}

TEST_CASE("quadrature settings do not move the overlap") {
  const auto pt = at(1.0, 100, 0.6);
  const double a = 0.5 + thermal_jz(pt);
  QuadratureSpec wide;
  wide.window_halfwidth_sigmas = 12.0;
  const double d8 = overlap_finite_t(pt, a);
  const double d12 = overlap_finite_t(pt, a, wide);
  CHECK(std::abs(d8 - d12) < 1e-9 * d8);
}

TEST_CASE("thermal moments without coupling") {
  for (double beta : {0.3, 2.0}) {
    const int n = 12;
    const auto m = thermal_moments(at(0.0, n, beta));
    const double sz = -std::tanh(beta / 2.0);
    CHECK(m.first[2] == doctest::Approx(0.5 * sz).epsilon(1e-12));
    CHECK(m.first[0] == 0.0);
    CHECK(m.first[1] == 0.0);
    CHECK(m.variance(Axis::X) * n * n == doctest::Approx(n / 4.0).epsilon(1e-12));
    CHECK(m.second[2] * n * n == doctest::Approx(n / 4.0 + n * (n - 1) / 4.0 * sz * sz).epsilon(1e-12));
  }
}

TEST_CASE("thermal J_x vanishes by symmetry") {
  for (double l : {0.3, 0.9, 1.4})
    for (double beta : {0.2, 1.0, 5.0}) CHECK(std::abs(thermal_moments(at(l, 50, beta)).first[0]) < 1e-12);
}

TEST_CASE("thermal moments against the thermal oracle at beta = 0.2") {
  for (double l : {0.5, 1.0}) {
    const auto m = thermal_moments(at(l, 4, 0.2));
    const auto e = oracle::exact_moments(oracle::exact_thermal_state({1.0, 1.0, l, 4}, 40, 0.2));
    for (int k = 0; k < 3; ++k) {
      CHECK(std::abs(m.first[k] - e.first[k]) < 0.02);
      CHECK(std::abs(m.second[k] - e.second[k]) < 0.02);
    }
  }
}

TEST_CASE("evaluate_finite_t fields") {
  const auto r = evaluate_finite_t(at(1.0, 100, 1.0 / 1.5));
  CHECK(r.phase == Phase::Superradiant);
  CHECK(r.a == doctest::Approx(0.5 + r.jz).epsilon(1e-15));
  CHECK_FALSE(r.low_temperature);
  CHECK(evaluate_finite_t(at(1.0, 100, 1.0 / 2.5)).phase == Phase::Normal);
  CHECK(evaluate_finite_t(at(0.3, 10, 20.0)).low_temperature);
}

TEST_CASE("largest temperature slope of the overlap sits near the critical line") {
  double best_t = 0.0, best = -1.0;
  double prev = evaluate_finite_t(at(1.0, 100, 1.0 / 0.5)).delta;
  for (int i = 1; i <= 100; ++i) {
    const double t = 0.5 + 0.025 * i;
    const double d = evaluate_finite_t(at(1.0, 100, 1.0 / t)).delta;
    const double slope = std::abs(d - prev) / 0.025;
    if (slope > best) {
      best = slope;
      best_t = t - 0.0125;
    }
    prev = d;
  }
  MESSAGE("peak of |dDelta/dT| at T = " << best_t);
  CHECK(std::abs(best_t - 2.0) <= 0.2);
}
