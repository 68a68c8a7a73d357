#include "dicke/errors.hpp"
#include "dicke/oracle.hpp"
#include "dicke/thermal.hpp"
#include "dicke/witness.hpp"
#include "dicke/zerotemp.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace dicke;

namespace {

// Moments of the symmetric Dicke state |j = N/2, m> from angular momentum algebra.
MomentSet dicke_state(int n, double m) {
  const double j = n / 2.0;
  const double perp = 0.5 * (j * (j + 1) - m * m);  // <J_x^2> = <J_y^2>
  MomentSet out;
  out.n_atoms = n;
  out.first = {0.0, 0.0, m / n};
  out.second = {perp / (n * n), perp / (n * n), m * m / (n * n)};
  return out;
}

const WitnessEntry& find(const WitnessReport& r, const std::string& label) {
  for (const auto& e : r.entries)
    if (e.label() == label) return e;
  throw std::runtime_error("no entry " + label);
}

}  // namespace

TEST_CASE("report has one B entry and six C and D entries") {
  const auto r = evaluate(dicke_state(10, -5));
  REQUIRE(r.entries.size() == 13);
  int b = 0, c = 0, d = 0;
  std::set<std::string> labels;
  for (const auto& e : r.entries) {
    b += e.kind == Inequality::B;
    c += e.kind == Inequality::C;
    d += e.kind == Inequality::D;
    labels.insert(e.label());
  }
  CHECK(b == 1);
  CHECK(c == 6);
  CHECK(d == 6);
  CHECK(labels.size() == 13);
  CHECK(labels.count("c:z-x-y") == 1);
  CHECK(labels.count("d:y-z-x") == 1);
}

TEST_CASE("axis permutations are all distinct orderings") {
  std::set<std::array<Axis, 3>> seen(axis_permutations().begin(), axis_permutations().end());
  CHECK(seen.size() == 6);
}

TEST_CASE("coherent all-down state sits on the B boundary") {
  for (int n : {1, 10, 100, 1000}) {
    const auto r = evaluate(dicke_state(n, -n / 2.0));
    CHECK(std::abs(find(r, "b:x-y-z").lhs) < 1e-9);
    CHECK_FALSE(find(r, "b:x-y-z").violated);
    // The large-N D form drops O(1/N) terms; on a coherent state that leaves -1/(4N) for gamma = y or x.
    CHECK(find(r, "d:x-z-y").lhs == doctest::Approx(-0.25 / n).epsilon(1e-12));
    CHECK(find(r, "d:x-y-z").lhs == doctest::Approx(0.0));
    // the finite-N forms hold with equality or better
    const auto f = evaluate_finite_n(dicke_state(n, -n / 2.0));
    CHECK_FALSE(f.any_violation);
    CHECK(std::abs(find(f, "d:x-z-y").lhs) < 1e-12);
  }
}

TEST_CASE("half-excited Dicke state violates C with gamma = z") {
  const auto r = evaluate(dicke_state(100, 0));
  // N v_z - (s_x + s_y) + 1/(2N) = 0 - (N/2)(N/2 + 1)/N^2 + 1/(2N) = -1/4
  for (const char* label : {"c:x-y-z", "c:y-x-z"}) {
    CHECK(find(r, label).lhs == doctest::Approx(-0.25).epsilon(1e-12));
    CHECK(find(r, label).violated);
  }
  CHECK(r.any_violation);
}

TEST_CASE("finite-N forms on Dicke states") {
  // Every Dicke state saturates sum <J_k^2> = j(j+1); the coherent state sits on the finite-N B boundary.
  const auto r = evaluate_finite_n(dicke_state(8, -4));
  CHECK(std::abs(find(r, "b:x-y-z").lhs) < 1e-12);
  const auto h = evaluate_finite_n(dicke_state(8, 0));
  // (N-1)*0 - (N/2)(N/2+1) + N/2, divided by N^2
  CHECK(find(h, "c:x-y-z").lhs == doctest::Approx((-4.0 * 5.0 + 4.0) / 64.0).epsilon(1e-12));
  CHECK(h.any_violation);
}

TEST_CASE("tolerance separates noise from violations") {
  auto m = dicke_state(10, -5);
  m.second[0] -= 5e-10;  // shifts the B lhs by -5e-10
  CHECK_FALSE(find(evaluate(m), "b:x-y-z").violated);
  m.second[0] -= 5e-9;
  CHECK(find(evaluate(m), "b:x-y-z").violated);
}

TEST_CASE("invalid moment sets are rejected") {
  auto m = dicke_state(10, 0);
  m.first[0] = 0.5;  // variance becomes negative
  try {
    evaluate(m);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidInput);
  }
  auto big = dicke_state(10, 0);
  big.second[2] = 0.5;  // total spin above N(N+2)/4
  CHECK_THROWS_AS(evaluate(big), Error);
}

TEST_CASE("total spin bound holds for oracle states") {
  for (double l : {0.0, 0.3, 0.8}) {
    const auto g = oracle::exact_moments(oracle::exact_ground_state({1.0, 1.0, l, 12}, 40));
    CHECK(evaluate(g).total_spin_lhs >= 0.25 - 14.0 / (4 * 12) - 1e-10);
    CHECK_NOTHROW(g.validate());
    const auto t = oracle::exact_moments(oracle::exact_thermal_state({1.0, 1.0, l, 3}, 30, 0.7));
    CHECK_NOTHROW(t.validate());
  }
}

TEST_CASE("zero-temperature ground states violate C or D above lambda_c") {
  bool found = false;
  for (double l = 0.55; l <= 1.5; l += 0.05) {
    const ModelParams p{1.0, 1.0, l, 100};
    const auto m = collective_moments_zero_t(solve_ground_state(p, {{60, 60}, true, 600}), p);
    const auto r = evaluate(m);
    for (const auto& e : r.entries)
      if (e.kind != Inequality::B && e.violated) found = true;
  }
  CHECK(found);
}

TEST_CASE("B holds at zero temperature for all couplings") {
  for (double l = 0.0; l <= 1.5; l += 0.05) {
    if (std::abs(l - 0.5) < 1e-9) continue;
    const ModelParams p{1.0, 1.0, l, 100};
    const auto m = collective_moments_zero_t(solve_ground_state(p, {{60, 60}, true, 600}), p);
    CHECK(find(evaluate(m), "b:x-y-z").lhs >= -kWitnessTolerance);
  }
}

TEST_CASE("finite-temperature moments satisfy every finite-N inequality") {
  for (double l = 0.0; l <= 1.5; l += 0.1)
    for (double t = 0.2; t <= 3.0; t += 0.2) {
      const auto m = thermal_moments({{1.0, 1.0, l, 100}, 1.0 / t});
      CHECK_FALSE(evaluate_finite_n(m).any_violation);
    }
}
