#pragma once

#include "dicke/moments.hpp"

#include <array>
#include <string>
#include <vector>

namespace dicke {

inline constexpr double kWitnessTolerance = 1e-9;

enum class Inequality { B, C, D };

struct WitnessEntry {
  Inequality kind;
  std::array<Axis, 3> axes;  // (alpha, beta, gamma); (x, y, z) for B
  double lhs;                // required >= 0 for separable states
  bool violated;             // lhs < -kWitnessTolerance

  // e.g. "c:z-x-y"
  std::string label() const;
};

struct WitnessReport {
  // 1/4 - sum_k <J_k^2>/N^2, a bound every state satisfies (not a witness).
  double total_spin_lhs = 0.0;
  std::vector<WitnessEntry> entries;  // one B entry, then six C and six D
  bool any_violation = false;
};

// The six orderings of (x, y, z) in a fixed order.
const std::array<std::array<Axis, 3>, 6>& axis_permutations();

/**
 * @brief Large-N per-atom spin-squeezing inequalities.
 *
 * With v_k = Delta^2 J_k/N^2 and s_k = <J_k^2>/N^2:
 *   B: v_x + v_y + v_z - 1/(2N)
 *   C: N v_gamma - (s_alpha + s_beta) + 1/(2N)
 *   D: N (v_alpha + v_beta) - s_gamma - 1/4
 */
WitnessReport evaluate(const MomentSet& moments);

/**
 * @brief Finite-N forms divided by N^2.
 *
 *   B: sum_k Delta^2 J_k - N/2
 *   C: (N-1) Delta^2 J_gamma - <J_alpha^2> - <J_beta^2> + N/2
 *   D: (N-1) (Delta^2 J_alpha + Delta^2 J_beta) - <J_gamma^2> - N(N-2)/4
 */
WitnessReport evaluate_finite_n(const MomentSet& moments);

}  // namespace dicke
