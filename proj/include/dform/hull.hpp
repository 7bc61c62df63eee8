#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "dform/vec3.hpp"

namespace dform {

class SampledCurve;
struct VertexReport;

/// Oriented plane: dot(normal, x) + offset, with unit normal.
struct Plane {
  Vec3 normal{};
  double offset = 0.0;

  double signed_distance(const Vec3& p) const { return dot(normal, p) + offset; }
};

/// Triangulated convex hull with outward-oriented facets.
struct HullMesh {
  std::vector<Vec3> vertices;
  /// Counter-clockwise seen from outside.
  std::vector<std::array<std::uint32_t, 3>> facets;
  std::vector<Plane> planes;
  /// Index into the input point list for each hull vertex.
  std::vector<std::size_t> vertex_origin;
  std::size_t input_size = 0;
  /// Scale-relative tolerance used during construction and in queries.
  double epsilon = 0.0;
  /// Points discarded because their visible region did not bound a disk
  /// (numerical failure). Normally 0.
  std::size_t dropped_points = 0;

  std::size_t edge_count() const { return facets.size() * 3 / 2; }
  Vec3 centroid() const;
};

/// Tolerance factor applied to the bounding-box diagonal.
inline constexpr double kHullTolerance = 1e-9;

/// Quickhull. Requires at least 4 affinely independent points; throws
/// DegenerateHullError when every point lies in one plane.
HullMesh build_hull(std::span<const Vec3> points);

/// Signed tetrahedra from the vertex centroid, summed over facets.
double mesh_volume(const HullMesh& mesh);
double mesh_area(const HullMesh& mesh);

struct Containment {
  enum class Kind { Inside, OnBoundary, Outside };
  Kind kind = Kind::Outside;
  /// Distance to the nearest facet plane (non-negative).
  double margin = 0.0;
};

Containment contains(const HullMesh& mesh, const Vec3& p);

/// Largest signed facet-plane distance; negative inside.
double max_plane_distance(const HullMesh& mesh, const Vec3& p);

/// Basic structural checks: Euler characteristic, watertightness, outward
/// normals.
struct MeshCheck {
  int euler_characteristic = 0;
  bool watertight = false;
  bool outward = false;
  bool ok() const { return euler_characteristic == 2 && watertight && outward; }
};

MeshCheck check_mesh(const HullMesh& mesh);

/// Coplanar facet groups touching several well-separated curve samples.
///
/// This is a heuristic stand-in for the support polygons of a space curve:
/// facets are merged across shared edges when their normals differ by less
/// than 1e-6 rad and their offsets by less than the hull tolerance, and a
/// group counts when it touches at least three curve samples that are
/// pairwise more than `separation` indices apart (cyclically).
struct SupportPolygonReport {
  int polygon_count = 0;
  /// Curve sample indices touched by each counted group.
  std::vector<std::vector<std::size_t>> polygons;
  std::size_t separation = 0;
};

/// Index separation used for a curve of n samples: min(2, n / 12). Coarse
/// polygons treat every distinct corner as separate.
std::size_t support_separation(std::size_t n);

SupportPolygonReport support_polygons(const HullMesh& mesh,
                                      const SampledCurve& curve);

struct InequalityReport {
  bool satisfied = false;
  int slack = 0;
};

/// V + 2K >= 4 + P, with the external-segment count taken as zero (the curve
/// lies on its hull).
InequalityReport four_vertex_inequality_report(const VertexReport& report,
                                               const SupportPolygonReport& sp);

/// Wavefront OBJ: "v x y z" lines (17 significant digits) then "f i j k"
/// lines with 1-based indices, LF line endings.
void write_obj(std::ostream& os, const HullMesh& mesh);

}  // namespace dform
