#include "dicke/errors.hpp"
#include "dicke/oracle.hpp"
#include "dicke/separable.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

using namespace dicke;

namespace {

// C(N,n) a^n (1-a)^(N-n) by repeated multiplication in long double.
long double direct_weight(int n_atoms, int n, long double a) {
  long double c = 1.0L;
  for (int k = 0; k < n; ++k) c = c * (n_atoms - k) / (k + 1);
  long double p = c;
  for (int k = 0; k < n; ++k) p *= a;
  for (int k = 0; k < n_atoms - n; ++k) p *= 1.0L - a;
  return p;
}

std::vector<double> binomial(int n_atoms, double a) {
  std::vector<double> p(n_atoms + 1);
  for (int n = 0; n <= n_atoms; ++n) p[n] = static_cast<double>(direct_weight(n_atoms, n, a));
  return p;
}

}  // namespace

TEST_CASE("from_jz examples") {
  const auto s = SeparableState::from_jz(-0.5, 10);
  CHECK(s.a() == 0.0);
  CHECK(log_weight(s, 0) == 0.0);
  for (int n = 1; n <= 10; ++n) CHECK(std::isinf(log_weight(s, n)));

  const auto h = SeparableState::from_jz(0.0, 2);
  CHECK(h.a() == 0.5);
  CHECK(std::exp(log_weight(h, 0)) == doctest::Approx(0.25));
  CHECK(std::exp(log_weight(h, 1)) == doctest::Approx(0.5));
  CHECK(std::exp(log_weight(h, 2)) == doctest::Approx(0.25));

  CHECK(SeparableState::from_jz(-0.125, 100).a() == 0.375);
}

TEST_CASE("from_jz rejects values outside [-1/2, 1/2]") {
  CHECK_THROWS_AS(SeparableState::from_jz(-0.51, 4), Error);
  CHECK_THROWS_AS(SeparableState::from_jz(0.6, 4), Error);
  CHECK_THROWS_AS(SeparableState::from_probability(1.2, 4), Error);
  CHECK_THROWS_AS(SeparableState::from_jz(0.0, 0), Error);
}

TEST_CASE("log_weight examples") {
  CHECK(log_weight(SeparableState::from_probability(0.0, 7), 0) == 0.0);
  CHECK(log_weight(SeparableState::from_probability(0.5, 2), 1) == doctest::Approx(std::log(0.5)));
  const auto s = SeparableState::from_probability(0.3, 100);
  CHECK(std::isfinite(log_weight(s, 30)));
  try {
    log_weight(s, 101);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Index);
  }
  CHECK_THROWS_AS(log_weight(s, -1), Error);
}

TEST_CASE("log_weight matches direct products for N <= 30") {
  for (int n_atoms : {1, 5, 17, 30})
    for (double a : {0.05, 0.3, 0.5, 0.91}) {
      const auto s = SeparableState::from_probability(a, n_atoms);
      for (int n = 0; n <= n_atoms; ++n)
        CHECK(log_weight(s, n) == doctest::Approx(std::log(static_cast<double>(direct_weight(n_atoms, n, a))))
                                      .epsilon(1e-12));
    }
}

TEST_CASE("log_weight stays finite for very large N") {
  const auto s = SeparableState::from_probability(0.3, 1000000);
  CHECK(std::isfinite(log_weight(s, 300000)));
  CHECK(log_weight(s, 300000) > log_weight(s, 250000));
}

TEST_CASE("normalization and mean matching over a grid of a") {
  for (int n_atoms : {1, 2, 13, 100, 1000}) {
    for (int i = 0; i <= 10; ++i) {
      const double a = 0.1 * i;
      const auto s = SeparableState::from_probability(a, n_atoms);
      double total = 0.0, mean = 0.0;
      for (int n = 0; n <= n_atoms; ++n) {
        const double w = std::exp(log_weight(s, n));
        total += w;
        mean += n * w;
      }
      CHECK(std::abs(total - 1.0) < 1e-12);
      CHECK(std::abs(mean - n_atoms * a) < 1e-9 * std::max(1, n_atoms / 100));
      // <J_z> = N (a - 1/2)
      CHECK(std::abs((mean - 0.5 * n_atoms) - n_atoms * (a - 0.5)) < 1e-9 * std::max(1, n_atoms / 100));
    }
  }
}

TEST_CASE("single-atom matrix is diagonal") {
  const auto m = SeparableState::from_probability(0.37, 9).single_atom_matrix();
  CHECK(m[0][0] == doctest::Approx(0.37));
  CHECK(m[1][1] == doctest::Approx(0.63));
  CHECK(m[0][1] == 0.0);
  CHECK(m[1][0] == 0.0);
}

TEST_CASE("configuration weights and binomial weights differ by C(N,n)") {
  const auto s = SeparableState::from_probability(0.2, 6);
  for (int n = 0; n <= 6; ++n)
    CHECK(log_weight(s, n) - log_configuration_weight(s, n) ==
          doctest::Approx(std::log(static_cast<double>(direct_weight(6, n, 0.5L) * 64.0L))));
}

TEST_CASE("diagonal_overlap of a binomial with itself") {
  const auto s = SeparableState::from_probability(0.4, 12);
  const auto p = binomial(12, 0.4);
  double expected = 0.0;
  for (double v : p) expected += v * v;
  CHECK(diagonal_overlap(s, p) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("nearest_a examples") {
  std::vector<double> down(11, 0.0);
  down[0] = 1.0;
  const auto r0 = nearest_a(down);
  CHECK(r0.a_jz_matched == 0.0);
  CHECK(r0.a_argmax < 1e-8);
  CHECK(r0.overlap_argmax == doctest::Approx(1.0));

  const auto p = binomial(20, 0.3);
  const auto r = nearest_a(p);
  CHECK(std::abs(r.a_jz_matched - 0.3) < 1e-6);
  CHECK(r.overlap_argmax >= r.overlap_jz_matched - 1e-12);
}

// Brute-force maximum of sum_n w_n(a) p_n on a fine grid.
double scan_max(const std::vector<double>& p) {
  const int n_atoms = static_cast<int>(p.size()) - 1;
  double best = -1.0;
  for (int i = 0; i <= 100000; ++i) {
    const double a = i / 100000.0;
    double s = 0.0;
    for (int n = 0; n <= n_atoms; ++n) s += static_cast<double>(direct_weight(n_atoms, n, a)) * p[n];
    best = std::max(best, s);
  }
  return best;
}

TEST_CASE("nearest_a on binomial inputs") {
  for (int n_atoms : {3, 8, 40})
    for (double a : {0.1, 0.25, 0.5, 0.77}) {
      CAPTURE(n_atoms);
      CAPTURE(a);
      const auto p = binomial(n_atoms, a);
      const auto r = nearest_a(p);
      CHECK(std::abs(r.a_jz_matched - a) < 1e-8);
      // the overlap-maximizing a is a genuine maximum, but not a itself in general
      CHECK(r.overlap_argmax >= scan_max(p) - 1e-10);
      CHECK(r.overlap_argmax >= r.overlap_jz_matched - 1e-12);
    }
}

TEST_CASE("for one atom the overlap is linear in a and peaks at an endpoint") {
  const auto r = nearest_a(std::vector<double>{0.7, 0.3});
  CHECK(r.a_jz_matched == doctest::Approx(0.3));
  CHECK(r.a_argmax < 1e-8);
  CHECK(r.overlap_argmax == doctest::Approx(0.7));
}

TEST_CASE("nearest_a rejects unnormalized input") {
  try {
    nearest_a(std::vector<double>{0.5, 0.4});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidDistribution);
  }
  CHECK_THROWS_AS(nearest_a(std::vector<double>{1.2, -0.2}), Error);
}

TEST_CASE("nearest_a on the exact ground-state diagonal at lambda = 1, N = 20") {
  const auto ed = oracle::exact_ground_state({1.0, 1.0, 1.0, 20}, 70);
  const Eigen::VectorXd p = oracle::up_count_distribution(ed);
  const std::vector<double> probs(p.data(), p.data() + p.size());
  const auto r = nearest_a(probs);
  MESSAGE("a_jz_matched=" << r.a_jz_matched << " a_argmax=" << r.a_argmax
                          << " difference=" << r.a_argmax - r.a_jz_matched);
  CHECK(r.a_jz_matched > 0.3);
  CHECK(r.a_jz_matched < 0.45);
  CHECK(r.overlap_argmax >= r.overlap_jz_matched);
}
