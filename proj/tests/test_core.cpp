#include "dicke/core.hpp"
#include "dicke/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace dicke;

TEST_CASE("critical_coupling examples") {
  CHECK(critical_coupling(1.0, 1.0) == 0.5);
  CHECK(critical_coupling(4.0, 1.0) == 1.0);
  CHECK(critical_coupling(2.0, 2.0) == 1.0);
  CHECK(critical_coupling(ModelParams{1.0, 1.0, 0.3, 5}) == 0.5);
}

TEST_CASE("critical_coupling rejects non-positive frequencies") {
  CHECK_THROWS_AS(critical_coupling(0.0, 1.0), Error);
  CHECK_THROWS_AS(critical_coupling(1.0, -1.0), Error);
  try {
    critical_coupling(-2.0, 1.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidParameter);
  }
}

TEST_CASE("critical_coupling is symmetric in its arguments") {
  for (double w : {0.1, 0.7, 1.0, 3.3, 250.0})
    for (double w0 : {0.05, 1.0, 2.9, 17.0}) CHECK(critical_coupling(w, w0) == critical_coupling(w0, w));
}

TEST_CASE("ModelParams validation") {
  CHECK_NOTHROW(ModelParams{1, 1, 0, 1}.validate());
  CHECK_THROWS_AS(ModelParams({1, 1, -0.1, 1}).validate(), Error);
  CHECK_THROWS_AS(ModelParams({1, 0, 0.1, 1}).validate(), Error);
  CHECK_THROWS_AS(ModelParams({1, 1, 0.1, 0}).validate(), Error);
  CHECK_THROWS_AS(ModelParams({NAN, 1, 0.1, 3}).validate(), Error);
}

TEST_CASE("critical_temperature examples") {
  const auto t1 = critical_temperature({1.0, 1.0, 1.0, 10});
  REQUIRE(t1.has_value());
  CHECK(std::abs(*t1 - 2.0) < 1e-10);

  const auto t07 = critical_temperature({1.0, 1.0, 0.7, 10});
  REQUIRE(t07.has_value());
  CHECK(std::abs(*t07 - 0.98) < 1e-10);

  // omega = 2: the residual vanishes at the returned root and changes sign around it.
  const ModelParams p{2.0, 1.0, 1.0, 10};
  const auto t2 = critical_temperature(p);
  REQUIRE(t2.has_value());
  const double beta = 1.0 / *t2;
  CHECK(std::abs(critical_temperature_residual(p, beta)) < 1e-10);
  CHECK(critical_temperature_residual(p, beta * (1 - 1e-6)) * critical_temperature_residual(p, beta * (1 + 1e-6)) <
        0.0);
  // independent check: scan a beta grid and bisect the first sign change by hand
  double lo = 1e-6, hi = 0.0;
  for (double b = 1e-6; b < 1e3; b *= 1.01) {
    if (critical_temperature_residual(p, b) * critical_temperature_residual(p, 1e-6) < 0) {
      hi = b;
      break;
    }
    lo = b;
  }
  REQUIRE(hi > 0.0);
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (lo + hi);
    (critical_temperature_residual(p, m) * critical_temperature_residual(p, lo) > 0 ? lo : hi) = m;
  }
  CHECK(beta == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-11));
}

TEST_CASE("critical_temperature is absent without coupling") {
  CHECK_FALSE(critical_temperature({1.0, 1.0, 0.0, 4}).has_value());
}

TEST_CASE("critical_temperature equals 2 lambda^2/omega0 when omega = omega0") {
  for (double w : {0.5, 1.0, 2.0})
    for (double l : {0.3, 0.6, 1.0, 1.4}) {
      const ModelParams p{w, w, l, 3};
      const auto tc = critical_temperature(p);
      if (!tc) continue;  // outside the beta bracket
      CHECK(std::abs(*tc - 2.0 * l * l / w) < 1e-10 * std::max(1.0, *tc));
      CHECK(critical_temperature_reduced(p) == doctest::Approx(2.0 * l * l / w));
    }
}

TEST_CASE("standard critical temperature exists only above lambda_c") {
  CHECK_FALSE(critical_temperature_standard({1, 1, 0.4, 5}).has_value());
  CHECK_FALSE(critical_temperature_standard({1, 1, 0.5, 5}).has_value());
  const auto t = critical_temperature_standard({1, 1, 1.0, 5});
  REQUIRE(t.has_value());
  // tanh(omega0 / (2 T)) = lambda_c^2 / lambda^2
  CHECK(std::tanh(0.5 / *t) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("order_parameter_zero_t examples") {
  CHECK(order_parameter_zero_t({1, 1, 0.4, 10}) == -0.5);
  CHECK(order_parameter_zero_t({1, 1, 0.5, 10}) == -0.5);
  CHECK(order_parameter_zero_t({1, 1, 0.5 * (1 + 1e-15), 10}) == doctest::Approx(-0.5));
  CHECK(order_parameter_zero_t({1, 1, 1.0, 10}) == -0.125);
}

TEST_CASE("order_parameter_zero_t is non-decreasing and bounded") {
  double prev = -0.5;
  for (int i = 0; i <= 600; ++i) {
    const double l = 0.005 * i;
    const double v = order_parameter_zero_t({1.3, 0.7, l, 8});
    CHECK(v >= prev);
    CHECK(v >= -0.5);
    CHECK(v < 0.0);
    prev = v;
  }
}

TEST_CASE("classify_phase") {
  CHECK(classify_phase({1, 1, 0.3, 10}, 0.0) == Phase::Normal);
  CHECK(classify_phase({1, 1, 0.5, 10}, 0.0) == Phase::Normal);
  CHECK(classify_phase({1, 1, 0.7, 10}, 0.0) == Phase::Superradiant);
  CHECK(classify_phase({1, 1, 1.0, 10}, 1.5) == Phase::Superradiant);
  CHECK(classify_phase({1, 1, 1.0, 10}, 2.5) == Phase::Normal);
  CHECK(classify_phase({1, 1, 0.4, 10}, 0.01) == Phase::Normal);
  CHECK(to_string(Phase::Superradiant) == "superradiant");
}
