#pragma once

#include <array>

#include "dform/vec3.hpp"

namespace dform {

/// Row-major 3x3 matrix.
struct Mat3 {
  std::array<Vec3, 3> rows{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};

  constexpr Vec3 operator*(const Vec3& v) const {
    return {dot(rows[0], v), dot(rows[1], v), dot(rows[2], v)};
  }
};

/// Rotation by `angle` radians about the unit `axis` (Rodrigues).
Mat3 rotation_about(const Vec3& axis, double angle);

/// Rotation from a (not necessarily normalized, non-zero) quaternion.
Mat3 rotation_from_quaternion(double w, double x, double y, double z);

/// x -> scale * (linear * x) + translation. With an orthogonal `linear` this
/// is a similarity; derivatives transform by `scale * linear` only.
struct Similarity {
  Mat3 linear{};
  Vec3 translation{};
  double scale = 1.0;

  Vec3 apply_point(const Vec3& p) const {
    return scale * (linear * p) + translation;
  }
  Vec3 apply_vector(const Vec3& v) const { return scale * (linear * v); }
};

}  // namespace dform
