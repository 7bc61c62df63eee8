#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dform/transform.hpp"
#include "dform/vec3.hpp"

namespace dform {

struct HullMesh;

/// A closed space curve given by a periodic map t -> position(t), t in [0, T).
///
/// Exact first through third derivatives may be supplied. When they are not,
/// derivative() falls back to fourth-order central differences with step
/// h = T * 1e-4.
class AnalyticCurve {
 public:
  using Map = std::function<Vec3(double)>;

  AnalyticCurve(std::string name, double period, Map position, Map d1 = {},
                Map d2 = {}, Map d3 = {});

  const std::string& name() const { return name_; }
  double period() const { return period_; }
  bool has_exact_derivatives() const { return d1_ && d2_ && d3_; }

  Vec3 position(double t) const { return position_(t); }

  /// order in {1, 2, 3}.
  Vec3 derivative(int order, double t) const;

  /// |position(T) - position(0)|.
  double closure_gap() const;

  /// The image of this curve under `xf`; exact derivatives are carried over.
  AnalyticCurve transformed(const Similarity& xf) const;

  /// Piecewise-linear closed curve through `points`, parameterized by
  /// cumulative chord length. Has no exact derivatives.
  static AnalyticCurve polyline(std::string name, std::vector<Vec3> points);

 private:
  std::string name_;
  double period_;
  Map position_;
  Map d1_, d2_, d3_;
};

/// Closed polygon r_0 .. r_{n-1}, indexed cyclically.
///
/// arc_lengths() has n+1 entries, starting at 0 and ending at
/// total_length(). For curves produced by sample_uniform the table holds the
/// arc length of the underlying smooth curve at each sample; for raw point
/// lists it is the cumulative chord length.
class SampledCurve {
 public:
  /// Builds a polygon from raw points. Requires n >= 3, finite coordinates
  /// and distinct consecutive points.
  static SampledCurve from_points(std::vector<Vec3> points);

  /// Builds a curve with a caller-supplied arc-length table (n+1 entries,
  /// strictly increasing, starting at 0).
  static SampledCurve with_arc_lengths(std::vector<Vec3> points,
                                       std::vector<double> arc_lengths);

  std::size_t size() const { return points_.size(); }
  std::span<const Vec3> points() const { return points_; }
  std::span<const Vec3> edges() const { return edges_; }
  std::span<const double> arc_lengths() const { return arc_lengths_; }
  double total_length() const { return arc_lengths_.back(); }

  /// Cyclic access: point(i) == points()[i mod n] for any integer i.
  const Vec3& point(std::ptrdiff_t i) const { return points_[wrap(i)]; }
  const Vec3& edge(std::ptrdiff_t i) const { return edges_[wrap(i)]; }

  /// Every other sample (n/2 points); requires an even size.
  SampledCurve every_other() const;

  SampledCurve transformed(const Similarity& xf) const;

  /// Relative spread (max - min) / mean of the edge lengths.
  double edge_length_spread() const;

 private:
  SampledCurve(std::vector<Vec3> points, std::vector<double> arc_lengths);

  std::size_t wrap(std::ptrdiff_t i) const {
    const auto n = static_cast<std::ptrdiff_t>(points_.size());
    return static_cast<std::size_t>(((i % n) + n) % n);
  }

  std::vector<Vec3> points_;
  std::vector<Vec3> edges_;
  std::vector<double> arc_lengths_;
};

/// Curvature and torsion sampled at uniform parameter values
/// t_i = i * T / n.
struct FrenetProfile {
  std::vector<double> params;
  std::vector<double> kappa;
  std::vector<double> tau;
  std::vector<Vec3> tangents;
  /// Samples where |r' x r''| fell below the curvature threshold; tau is
  /// reported as 0 there.
  std::vector<std::size_t> curvature_degenerate;
  double period = 0.0;
  bool exact_derivatives = false;

  std::size_t size() const { return kappa.size(); }
};

/// Vertices (sign changes of torsion) and curvature zeros of a closed curve.
struct VertexReport {
  int vertex_count = 0;
  std::vector<double> vertex_params;
  int curvature_zero_count = 0;
  bool is_planar = false;
  double min_kappa = 0.0;
  double max_abs_tau = 0.0;

  /// True when the vertex count carries no information (planar curve).
  bool degenerate() const { return is_planar; }
};

struct PlanarityResult {
  bool is_planar = false;
  Vec3 plane_normal{};
  Vec3 centroid{};
  double max_deviation = 0.0;
};

struct ConvexityResult {
  bool convex = false;
  std::vector<std::size_t> non_extreme_indices;
};

/// Relative torsion hysteresis: sign changes only count where |tau| exceeds
/// this fraction of max |tau| on both flanks.
inline constexpr double kTorsionHysteresis = 1e-7;
/// Samples with kappa below this fraction of max kappa count as curvature
/// zeros.
inline constexpr double kCurvatureZeroFraction = 1e-7;
/// Planarity threshold relative to total length.
inline constexpr double kPlanarityTolerance = 1e-9;
/// Closed-curve tolerance relative to total length.
inline constexpr double kClosureTolerance = 1e-6;

/// n points equally spaced in arc length. The arc-length table uses
/// max(20n, 10000) chords and is inverted by monotone linear interpolation.
SampledCurve sample_uniform(const AnalyticCurve& curve, std::size_t n);

/// Resamples a polygon (treated as a piecewise-linear closed curve).
SampledCurve resample_polyline(const SampledCurve& curve, std::size_t n);

FrenetProfile frenet_profile(const AnalyticCurve& curve, std::size_t n);

/// Counts torsion sign changes with hysteresis. A curve whose torsion is
/// negligible everywhere relative to its curvature is reported planar.
VertexReport count_vertices(const FrenetProfile& profile);

/// Discrete analogue for polygons: the torsion sign at sample i is the sign
/// of [e_{i-1}, e_i, e_{i+1}]. vertex_params hold fractional sample indices.
VertexReport count_vertices(const SampledCurve& curve);

/// Least-squares plane through the centroid; planar iff every point lies
/// within 1e-9 * L of it.
PlanarityResult planarity_check(const SampledCurve& curve);

/// Convex iff every sample is a vertex of `hull`, which must have been built
/// from exactly the points of `curve`.
ConvexityResult is_convex_curve(const SampledCurve& curve, const HullMesh& hull);

/// Builds the hull itself. Planar curves are checked against their 2D hull in
/// the fitted plane.
ConvexityResult is_convex_curve(const SampledCurve& curve);

}  // namespace dform
