#include "dform/transform.hpp"

#include <cmath>

namespace dform {

Mat3 rotation_about(const Vec3& axis, double angle) {
  const Vec3 k = normalized(axis);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double t = 1.0 - c;
  Mat3 m;
  m.rows[0] = {c + k.x * k.x * t, k.x * k.y * t - k.z * s,
               k.x * k.z * t + k.y * s};
  m.rows[1] = {k.y * k.x * t + k.z * s, c + k.y * k.y * t,
               k.y * k.z * t - k.x * s};
  m.rows[2] = {k.z * k.x * t - k.y * s, k.z * k.y * t + k.x * s,
               c + k.z * k.z * t};
  return m;
}

Mat3 rotation_from_quaternion(double w, double x, double y, double z) {
  const double len = std::sqrt(w * w + x * x + y * y + z * z);
  w /= len;
  x /= len;
  y /= len;
  z /= len;
  Mat3 m;
  m.rows[0] = {1 - 2 * (y * y + z * z), 2 * (x * y - w * z),
               2 * (x * z + w * y)};
  m.rows[1] = {2 * (x * y + w * z), 1 - 2 * (x * x + z * z),
               2 * (y * z - w * x)};
  m.rows[2] = {2 * (x * z - w * y), 2 * (y * z + w * x),
               1 - 2 * (x * x + y * y)};
  return m;
}

}  // namespace dform
