#pragma once

#include <array>

namespace dicke {

enum class Axis { X = 0, Y = 1, Z = 2 };

char axis_name(Axis axis);

/**
 * @brief Per-atom collective spin moments.
 *
 * first[k] = <J_k>/N and second[k] = <J_k^2>/N^2 for k in (x, y, z).
 */
struct MomentSet {
  int n_atoms = 1;
  std::array<double, 3> first{};
  std::array<double, 3> second{};

  double mean(Axis a) const { return first[static_cast<int>(a)]; }
  double second_moment(Axis a) const { return second[static_cast<int>(a)]; }
  // Delta^2 J_a / N^2
  double variance(Axis a) const { return second_moment(a) - mean(a) * mean(a); }

  // Throws InvalidInput when a variance is negative or the total spin bound fails.
  void validate() const;
};

}  // namespace dicke
