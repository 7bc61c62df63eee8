#pragma once

// Helpers shared by the test binaries. The oracles here deliberately avoid the
// library code paths they are used to check.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "dform/transform.hpp"
#include "dform/vec3.hpp"

namespace dform::testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline Vec3 random_vec(std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  return {uniform(rng, lo, hi), uniform(rng, lo, hi), uniform(rng, lo, hi)};
}

inline Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return rotation_from_quaternion(g(rng), g(rng), g(rng), g(rng));
}

inline Similarity random_rigid_motion(std::mt19937_64& rng) {
  Similarity xf;
  xf.linear = random_rotation(rng);
  xf.translation = random_vec(rng, -5.0, 5.0);
  return xf;
}

inline double relative_error(double actual, double expected) {
  return std::abs(actual - expected) / std::abs(expected);
}

/// Length of a closed parametric curve by summing `chords` chords.
template <typename F>
double chord_sum_length(F&& position, double period, std::size_t chords) {
  double total = 0.0;
  Vec3 prev = position(0.0);
  for (std::size_t k = 1; k <= chords; ++k) {
    const Vec3 p = position(period * static_cast<double>(k) /
                            static_cast<double>(chords));
    total += norm(p - prev);
    prev = p;
  }
  return total;
}

/// Sign changes of f around the cycle of `samples` uniform parameter values.
template <typename F>
int cyclic_sign_changes(F&& f, double period, std::size_t samples) {
  int changes = 0;
  double first = f(0.0);
  double prev = first;
  for (std::size_t k = 1; k <= samples; ++k) {
    const double v = k == samples ? first
                                  : f(period * static_cast<double>(k) /
                                      static_cast<double>(samples));
    if ((v > 0) != (prev > 0)) ++changes;
    prev = v;
  }
  return changes;
}

inline std::vector<Vec3> cube_corners() {
  std::vector<Vec3> pts;
  for (int i = 0; i < 8; ++i)
    pts.push_back({double(i & 1), double((i >> 1) & 1), double((i >> 2) & 1)});
  return pts;
}

inline std::vector<Vec3> octahedron() {
  return {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
}

}  // namespace dform::testing
