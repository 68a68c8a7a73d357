#include "dicke/witness.hpp"

#include "dicke/errors.hpp"

#include <cmath>
#include <sstream>

namespace dicke {

char axis_name(Axis axis) { return "xyz"[static_cast<int>(axis)]; }

void MomentSet::validate() const {
  constexpr double slack = 1e-10;
  if (n_atoms < 1) throw Error(ErrorKind::InvalidInput, "n_atoms must be >= 1", "n_atoms");
  for (int k = 0; k < 3; ++k) {
    if (!std::isfinite(first[k]) || !std::isfinite(second[k]))
      throw Error(ErrorKind::InvalidInput, "non-finite moment", std::string(1, "xyz"[k]));
    if (second[k] - first[k] * first[k] < -slack) {
      std::ostringstream msg;
      msg << "negative variance along " << "xyz"[k] << ": " << second[k] - first[k] * first[k];
      throw Error(ErrorKind::InvalidInput, msg.str(), std::string(1, "xyz"[k]));
    }
  }
  const double n = n_atoms;
  const double bound = n * (n + 2.0) / 4.0 / (n * n);
  if (second[0] + second[1] + second[2] > bound + slack)
    throw Error(ErrorKind::InvalidInput, "second moments exceed the total-spin bound N(N+2)/4");
}

std::string WitnessEntry::label() const {
  std::string s;
  s += kind == Inequality::B ? 'b' : (kind == Inequality::C ? 'c' : 'd');
  s += ':';
  s += axis_name(axes[0]);
  s += '-';
  s += axis_name(axes[1]);
  s += '-';
  s += axis_name(axes[2]);
  return s;
}

const std::array<std::array<Axis, 3>, 6>& axis_permutations() {
  static const std::array<std::array<Axis, 3>, 6> perms = {{
      {Axis::X, Axis::Y, Axis::Z},
      {Axis::X, Axis::Z, Axis::Y},
      {Axis::Y, Axis::X, Axis::Z},
      {Axis::Y, Axis::Z, Axis::X},
      {Axis::Z, Axis::X, Axis::Y},
      {Axis::Z, Axis::Y, Axis::X},
  }};
  return perms;
}

namespace {

template <class B, class C, class D>
WitnessReport assemble(const MomentSet& m, B b, C c, D d) {
  m.validate();
  WitnessReport r;
  r.total_spin_lhs = 0.25 - (m.second[0] + m.second[1] + m.second[2]);
  auto add = [&](Inequality kind, std::array<Axis, 3> axes, double lhs) {
    const bool bad = lhs < -kWitnessTolerance;
    r.entries.push_back({kind, axes, lhs, bad});
    r.any_violation = r.any_violation || bad;
  };
  add(Inequality::B, {Axis::X, Axis::Y, Axis::Z}, b());
  for (const auto& p : axis_permutations()) add(Inequality::C, p, c(p[0], p[1], p[2]));
  for (const auto& p : axis_permutations()) add(Inequality::D, p, d(p[0], p[1], p[2]));
  return r;
}

}  // namespace

WitnessReport evaluate(const MomentSet& m) {
  const double n = m.n_atoms;
  return assemble(
      m, [&] { return m.variance(Axis::X) + m.variance(Axis::Y) + m.variance(Axis::Z) - 1.0 / (2.0 * n); },
      [&](Axis a, Axis b, Axis g) {
        return n * m.variance(g) - (m.second_moment(a) + m.second_moment(b)) + 1.0 / (2.0 * n);
      },
      [&](Axis a, Axis b, Axis g) { return n * (m.variance(a) + m.variance(b)) - m.second_moment(g) - 0.25; });
}

WitnessReport evaluate_finite_n(const MomentSet& m) {
  const double n = m.n_atoms;
  return assemble(
      m, [&] { return m.variance(Axis::X) + m.variance(Axis::Y) + m.variance(Axis::Z) - 1.0 / (2.0 * n); },
      [&](Axis a, Axis b, Axis g) {
        return (n - 1.0) * m.variance(g) - m.second_moment(a) - m.second_moment(b) + 1.0 / (2.0 * n);
      },
      [&](Axis a, Axis b, Axis g) {
        return (n - 1.0) * (m.variance(a) + m.variance(b)) - m.second_moment(g) - (n - 2.0) / (4.0 * n);
      });
}

}  // namespace dicke
