#pragma once

#include <stdexcept>
#include <string>

namespace dform {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the arguments was violated.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// The curve does not close up within tolerance.
class OpenCurveError : public InvalidInput {
 public:
  OpenCurveError(const std::string& what, double gap)
      : InvalidInput(what), gap_(gap) {}
  double gap() const { return gap_; }

 private:
  double gap_;
};

/// A volume operation was handed a planar curve, or an area operation a
/// non-planar one.
class PlanarityError : public Error {
 public:
  PlanarityError(const std::string& what, double max_deviation)
      : Error(what), max_deviation_(max_deviation) {}
  double max_deviation() const { return max_deviation_; }

 private:
  double max_deviation_;
};

/// All input points lie in a common plane; no 3D hull exists.
class DegenerateHullError : public Error {
 public:
  using Error::Error;
};

/// A query point lies outside of (or on) the hull where an interior point is
/// required.
class OutsideHullError : public Error {
 public:
  OutsideHullError(const std::string& what, double signed_distance)
      : Error(what), signed_distance_(signed_distance) {}
  double signed_distance() const { return signed_distance_; }

 private:
  double signed_distance_;
};

}  // namespace dform
