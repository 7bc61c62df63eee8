#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dform/curve.hpp"
#include "dform/errors.hpp"
#include "dform/vec3.hpp"

namespace dform {

struct HullMesh;

namespace detail {

struct ExtVec {
  long double x, y, z;
};

constexpr ExtVec ext_diff(const Vec3& a, const Vec3& b) {
  return {static_cast<long double>(a.x) - b.x, static_cast<long double>(a.y) - b.y,
          static_cast<long double>(a.z) - b.z};
}

constexpr double ext_triple_over_6(const ExtVec& u, const ExtVec& v, const ExtVec& w) {
  return static_cast<double>((u.x * (v.y * w.z - v.z * w.y) +
                              u.y * (v.z * w.x - v.x * w.z) +
                              u.z * (v.x * w.y - v.y * w.x)) /
                             6.0L);
}

}  // namespace detail

/// (1/6) [r_i1 - r_i, r_j - r_i, r_j1 - r_i]: signed volume of the
/// tetrahedron spanned by edge (r_i, r_i1) and edge (r_j, r_j1).
/// Differences and the bracket are evaluated in extended precision.
constexpr double signed_tetra_volume(const Vec3& r_i, const Vec3& r_i1,
                                     const Vec3& r_j, const Vec3& r_j1) {
  return detail::ext_triple_over_6(detail::ext_diff(r_i1, r_i), detail::ext_diff(r_j, r_i),
                                   detail::ext_diff(r_j1, r_i));
}

/// Same quantity written with the second edge as a free vector:
/// (1/6) [r_i1 - r_i, r_j - r_i, r_j1 - r_j].
constexpr double signed_tetra_volume_edge_form(const Vec3& r_i,
                                               const Vec3& r_i1,
                                               const Vec3& r_j,
                                               const Vec3& r_j1) {
  return detail::ext_triple_over_6(detail::ext_diff(r_i1, r_i), detail::ext_diff(r_j, r_i),
                                   detail::ext_diff(r_j1, r_j));
}

/// Enclosed area of a planar closed polygon, (1/2) |sum r_i x r_{i+1}|,
/// evaluated after moving the centroid to the origin. Throws PlanarityError
/// for non-planar input.
double planar_area_integral(const SampledCurve& curve);

enum class VolumeMethod { DoubleSum, OracleHull };

const char* to_string(VolumeMethod m);

struct VolumeResult {
  double volume = 0.0;
  std::size_t n = 0;
  VolumeMethod method = VolumeMethod::DoubleSum;
  int multiplicity_m = 4;
  /// |V(n) - V(n/2)| using every other sample; 0 when n/2 is too small.
  double error_estimate = 0.0;
  /// Set when the vertex gate was overridden.
  bool unverified_hypothesis = false;
};

/// Raised when the curve does not have exactly four vertices.
class HypothesisError : public Error {
 public:
  HypothesisError(const std::string& what, VertexReport report)
      : Error(what), report_(std::move(report)) {}
  const VertexReport& report() const { return report_; }

 private:
  VertexReport report_;
};

struct VolumeOptions {
  int multiplicity = 4;
  /// Any multiplicity other than 4 must be requested explicitly.
  bool allow_nondefault_multiplicity = false;
  /// Skip the four-vertex gate; the result is marked unverified.
  bool override_vertex_gate = false;
  /// Vertex report to gate on. When absent the discrete torsion of the
  /// samples is used.
  std::optional<VertexReport> vertex_report;
  unsigned threads = 1;
  bool estimate_error = true;
};

/// Sum over all ordered edge pairs of |signed_tetra_volume|, evaluated with
/// a fixed pairwise reduction tree. The result does not depend on `threads`.
double abs_tetra_double_sum(std::span<const Vec3> points, unsigned threads = 1);

/// Hull volume of a convex closed curve with four vertices:
/// (1/m) * sum_{i,j} |V_{i,j}|.
VolumeResult hull_volume(const SampledCurve& curve,
                         const VolumeOptions& options = {});

/// Deterministic pairwise summation.
double pairwise_sum(std::span<const double> values);

struct PairClassification {
  enum class Kind { Interior, Boundary, Degenerate };
  std::size_t i = 0;
  std::size_t j = 0;
  Kind kind = Kind::Degenerate;
  double volume_ij = 0.0;
  double volume_next = 0.0;
  /// {r_{i+1}, r_j, r_{j+1}}
  std::array<Vec3, 3> shared_face_triangle{};
};

const char* to_string(PairClassification::Kind k);

/// Volumes below this fraction of L^3 are treated as degenerate.
inline constexpr double kDegenerateVolumeFraction = 1e-14;

/// Compares sign(V_{i,j}) with sign(V_{i+1,j}). Equal signs: the tetrahedra
/// lie on opposite sides of the shared triangle (Interior). Opposite signs:
/// both lie on one side, so the shared triangle is on the hull boundary.
PairClassification classify_adjacent_pair(const SampledCurve& curve,
                                          std::size_t i, std::size_t j);

struct CoveringEstimate {
  /// Number of clusters of chord hits; 0 means no chord came close enough.
  int multiplicity = 0;
  std::size_t hits = 0;
  /// Distance from p to the hull boundary.
  double margin = 0.0;
  /// margin < 0.01 L: the estimate is outside its validity range.
  bool near_boundary = false;
  double chord_tolerance = 0.0;
};

/// Chord hits closer than this many mean edge lengths to the probe.
inline constexpr double kChordToleranceEdges = 2.0;
/// Hits within this cyclic index distance in both coordinates share a cluster.
inline constexpr std::size_t kClusterGap = 3;
/// Minimum probe depth, relative to the curve length.
inline constexpr double kProbeMarginFraction = 0.01;

/// Counts how many times the chord family {r_i + u (r_j - r_i)} passes
/// through `p`: all ordered pairs i != j whose segment passes within
/// 2 L / n of p, clustered on the index torus. Throws OutsideHullError when p
/// is not strictly inside `hull` (which must be the hull of `curve`).
CoveringEstimate estimate_covering_multiplicity(const SampledCurve& curve,
                                                const HullMesh& hull,
                                                const Vec3& p,
                                                unsigned threads = 1);

}  // namespace dform
