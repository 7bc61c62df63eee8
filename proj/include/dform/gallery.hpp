#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dform/curve.hpp"

namespace dform::gallery {

/// A named analytic curve together with the properties the test suite
/// re-derives for it.
struct GalleryEntry {
  /// Canonical spec, e.g. "baseball:a=1,b=0.15,c=0.7".
  std::string name;
  AnalyticCurve curve;
  /// nullopt for planar curves, whose vertex count is undefined.
  std::optional<int> expected_vertex_count;
  bool expected_convex = false;
  bool expected_planar = false;
  std::vector<std::string> tags;
};

struct FamilyInfo {
  std::string name;
  std::string parameters;  // "a=1,b=0.15,c=0.7" or empty
  std::string description;
};

/// Registered families in a stable order.
const std::vector<FamilyInfo>& families();

/// Looks up "family" or "family:key=value,...". Unknown families or
/// parameters throw InvalidInput naming the alternatives.
GalleryEntry get(const std::string& spec);

/// Samples the curve at n points, builds its hull and reports whether every
/// sample is a hull vertex.
bool verify_all_extreme(const GalleryEntry& entry, std::size_t n);

}  // namespace dform::gallery
