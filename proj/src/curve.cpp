#include "dform/curve.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <sstream>

#include "dform/errors.hpp"
#include "dform/hull.hpp"

namespace dform {

namespace {

// Finite-difference step relative to the period.
constexpr double kDifferenceStep = 1e-4;

// Torsion is treated as identically zero when max |tau| stays below this
// fraction of max kappa. Finite differences of third order carry roundoff of
// roughly eps / h^3, hence the looser floor.
constexpr double kPlanarTorsionExact = 1e-9;
constexpr double kPlanarTorsionDifferenced = 1e-5;

Vec3 central_difference(const AnalyticCurve::Map& f, int order, double t,
                        double h) {
  switch (order) {
    case 1:
      return (f(t - 2 * h) - 8.0 * f(t - h) + 8.0 * f(t + h) - f(t + 2 * h)) /
             (12.0 * h);
    case 2:
      return (-1.0 * f(t - 2 * h) + 16.0 * f(t - h) - 30.0 * f(t) +
              16.0 * f(t + h) - f(t + 2 * h)) /
             (12.0 * h * h);
    case 3:
      return (f(t - 3 * h) - 8.0 * f(t - 2 * h) + 13.0 * f(t - h) -
              13.0 * f(t + h) + 8.0 * f(t + 2 * h) - f(t + 3 * h)) /
             (8.0 * h * h * h);
    default:
      throw InvalidInput("derivative order must be 1, 2 or 3");
  }
}

std::vector<double> chord_lengths(std::span<const Vec3> pts) {
  std::vector<double> s(pts.size() + 1, 0.0);
  for (std::size_t i = 0; i < pts.size(); ++i)
    s[i + 1] = s[i] + norm(pts[(i + 1) % pts.size()] - pts[i]);
  return s;
}

// Shared sign-change walk used by both vertex counters. `position(a, b, fa,
// fb)` maps a crossing between samples a and b to a reported location.
template <typename Locate>
std::vector<double> sign_changes(std::span<const double> values, double eps,
                                 Locate&& locate) {
  std::vector<double> crossings;
  const std::size_t n = values.size();
  std::size_t first = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(values[i]) > eps) {
      first = i;
      break;
    }
  }
  if (first == n) return crossings;
  std::size_t prev = first;
  for (std::size_t k = 1; k <= n; ++k) {
    const std::size_t idx = (first + k) % n;
    if (std::abs(values[idx]) <= eps) continue;
    if ((values[idx] > 0) != (values[prev] > 0))
      crossings.push_back(locate(prev, idx, values[prev], values[idx]));
    prev = idx;
  }
  std::sort(crossings.begin(), crossings.end());
  return crossings;
}

int cyclic_runs(const std::vector<char>& flags) {
  const std::size_t n = flags.size();
  if (n == 0) return 0;
  if (std::all_of(flags.begin(), flags.end(), [](char f) { return f != 0; }))
    return 1;
  int runs = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (flags[i] && !flags[(i + n - 1) % n]) ++runs;
  return runs;
}

}  // namespace

// ---------------------------------------------------------------------------
// AnalyticCurve

AnalyticCurve::AnalyticCurve(std::string name, double period, Map position,
                             Map d1, Map d2, Map d3)
    : name_(std::move(name)),
      period_(period),
      position_(std::move(position)),
      d1_(std::move(d1)),
      d2_(std::move(d2)),
      d3_(std::move(d3)) {
  if (!(period_ > 0.0) || !std::isfinite(period_))
    throw InvalidInput("curve period must be positive and finite");
  if (!position_) throw InvalidInput("curve needs a position map");
}

Vec3 AnalyticCurve::derivative(int order, double t) const {
  if (has_exact_derivatives()) {
    switch (order) {
      case 1:
        return d1_(t);
      case 2:
        return d2_(t);
      case 3:
        return d3_(t);
      default:
        throw InvalidInput("derivative order must be 1, 2 or 3");
    }
  }
  return central_difference(position_, order, t, period_ * kDifferenceStep);
}

double AnalyticCurve::closure_gap() const {
  return norm(position_(period_) - position_(0.0));
}

AnalyticCurve AnalyticCurve::transformed(const Similarity& xf) const {
  auto lift_point = [xf](const Map& f) -> Map {
    return [xf, f](double t) { return xf.apply_point(f(t)); };
  };
  auto lift_vector = [xf](const Map& f) -> Map {
    if (!f) return {};
    return [xf, f](double t) { return xf.apply_vector(f(t)); };
  };
  return AnalyticCurve(name_, period_, lift_point(position_), lift_vector(d1_),
                       lift_vector(d2_), lift_vector(d3_));
}

AnalyticCurve AnalyticCurve::polyline(std::string name,
                                      std::vector<Vec3> points) {
  if (points.size() < 3)
    throw InvalidInput("a closed polyline needs at least 3 points");
  auto s = chord_lengths(points);
  const double length = s.back();
  if (!(length > 0.0)) throw InvalidInput("polyline has zero length");
  auto pts = std::make_shared<const std::vector<Vec3>>(std::move(points));
  auto table = std::make_shared<const std::vector<double>>(std::move(s));
  auto position = [pts, table, length](double t) {
    const auto& p = *pts;
    const auto& s = *table;
    t = std::fmod(t, length);
    if (t < 0) t += length;
    auto it = std::upper_bound(s.begin(), s.end(), t);
    std::size_t k = static_cast<std::size_t>(it - s.begin());
    k = std::clamp<std::size_t>(k, 1, p.size()) - 1;
    const double seg = s[k + 1] - s[k];
    const double u = seg > 0 ? (t - s[k]) / seg : 0.0;
    const Vec3& a = p[k];
    const Vec3& b = p[(k + 1) % p.size()];
    return a + u * (b - a);
  };
  return AnalyticCurve(std::move(name), length, position);
}

// ---------------------------------------------------------------------------
// SampledCurve

SampledCurve::SampledCurve(std::vector<Vec3> points,
                           std::vector<double> arc_lengths)
    : points_(std::move(points)), arc_lengths_(std::move(arc_lengths)) {
  const std::size_t n = points_.size();
  if (n < 3) throw InvalidInput("a sampled curve needs at least 3 points");
  if (arc_lengths_.size() != n + 1)
    throw InvalidInput("arc-length table must have n+1 entries");
  edges_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_finite(points_[i]))
      throw InvalidInput("sample " + std::to_string(i) + " is not finite");
    edges_[i] = points_[(i + 1) % n] - points_[i];
    if (!(norm2(edges_[i]) > 0.0))
      throw InvalidInput("samples " + std::to_string(i) + " and " +
                         std::to_string((i + 1) % n) + " coincide");
  }
  if (arc_lengths_.front() != 0.0)
    throw InvalidInput("arc-length table must start at 0");
  for (std::size_t i = 0; i < n; ++i)
    if (!(arc_lengths_[i + 1] > arc_lengths_[i]))
      throw InvalidInput("arc-length table must be strictly increasing");
}

SampledCurve SampledCurve::from_points(std::vector<Vec3> points) {
  auto s = chord_lengths(points);
  return SampledCurve(std::move(points), std::move(s));
}

SampledCurve SampledCurve::with_arc_lengths(std::vector<Vec3> points,
                                            std::vector<double> arc_lengths) {
  return SampledCurve(std::move(points), std::move(arc_lengths));
}

SampledCurve SampledCurve::every_other() const {
  const std::size_t n = size();
  if (n % 2 != 0 || n < 6)
    throw InvalidInput("every_other needs an even sample count >= 6");
  std::vector<Vec3> pts;
  std::vector<double> s;
  pts.reserve(n / 2);
  s.reserve(n / 2 + 1);
  for (std::size_t i = 0; i < n; i += 2) {
    pts.push_back(points_[i]);
    s.push_back(arc_lengths_[i]);
  }
  s.push_back(arc_lengths_[n]);
  return SampledCurve(std::move(pts), std::move(s));
}

SampledCurve SampledCurve::transformed(const Similarity& xf) const {
  std::vector<Vec3> pts;
  pts.reserve(size());
  for (const auto& p : points_) pts.push_back(xf.apply_point(p));
  std::vector<double> s = arc_lengths_;
  for (auto& v : s) v *= std::abs(xf.scale);
  return SampledCurve(std::move(pts), std::move(s));
}

double SampledCurve::edge_length_spread() const {
  double lo = norm(edges_[0]);
  double hi = lo;
  double sum = 0;
  for (const auto& e : edges_) {
    const double l = norm(e);
    lo = std::min(lo, l);
    hi = std::max(hi, l);
    sum += l;
  }
  return (hi - lo) / (sum / static_cast<double>(edges_.size()));
}

// ---------------------------------------------------------------------------
// Sampling

SampledCurve sample_uniform(const AnalyticCurve& curve, std::size_t n) {
  if (n < 3) throw InvalidInput("sample_uniform needs n >= 3");
  const std::size_t m = std::max<std::size_t>(20 * n, 10000);
  const double period = curve.period();

  std::vector<double> t(m + 1);
  std::vector<double> s(m + 1, 0.0);
  Vec3 prev = curve.position(0.0);
  for (std::size_t k = 1; k <= m; ++k) {
    t[k] = period * static_cast<double>(k) / static_cast<double>(m);
    const Vec3 p = curve.position(t[k]);
    s[k] = s[k - 1] + norm(p - prev);
    prev = p;
  }
  const double length = s[m];
  if (!(length >= 1e-12))
    throw InvalidInput("curve '" + curve.name() + "' is degenerate (length " +
                       std::to_string(length) + ")");
  const double gap = curve.closure_gap();
  if (gap > kClosureTolerance * length) {
    std::ostringstream msg;
    msg << "curve '" << curve.name() << "' is not closed: |r(T) - r(0)| = "
        << gap << " exceeds " << kClosureTolerance << " * L";
    throw OpenCurveError(msg.str(), gap);
  }

  std::vector<Vec3> pts(n);
  std::vector<double> arc(n + 1);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double target =
        length * static_cast<double>(i) / static_cast<double>(n);
    while (k + 1 < m && s[k + 1] <= target) ++k;
    const double seg = s[k + 1] - s[k];
    const double u = seg > 0 ? (target - s[k]) / seg : 0.0;
    pts[i] = curve.position(t[k] + u * (t[k + 1] - t[k]));
    arc[i] = target;
  }
  arc[n] = length;
  return SampledCurve::with_arc_lengths(std::move(pts), std::move(arc));
}

SampledCurve resample_polyline(const SampledCurve& curve, std::size_t n) {
  auto points = curve.points();
  return sample_uniform(
      AnalyticCurve::polyline("polyline", {points.begin(), points.end()}), n);
}

// ---------------------------------------------------------------------------
// Frenet data and vertices

FrenetProfile frenet_profile(const AnalyticCurve& curve, std::size_t n) {
  if (n < 4) throw InvalidInput("frenet_profile needs n >= 4");
  FrenetProfile out;
  out.period = curve.period();
  out.exact_derivatives = curve.has_exact_derivatives();
  out.params.resize(n);
  out.kappa.resize(n);
  out.tau.resize(n);
  out.tangents.resize(n);

  double max_kappa = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t =
        curve.period() * static_cast<double>(i) / static_cast<double>(n);
    const Vec3 d1 = curve.derivative(1, t);
    const Vec3 d2 = curve.derivative(2, t);
    const Vec3 d3 = curve.derivative(3, t);
    const double speed = norm(d1);
    if (!(speed > 0.0))
      throw InvalidInput("curve '" + curve.name() +
                         "' has a stationary point at t = " +
                         std::to_string(t));
    const Vec3 b = cross(d1, d2);
    const double b2 = norm2(b);
    out.params[i] = t;
    out.tangents[i] = d1 / speed;
    out.kappa[i] = std::sqrt(b2) / (speed * speed * speed);
    out.tau[i] = b2 > 0.0 ? dot(b, d3) / b2 : 0.0;
    max_kappa = std::max(max_kappa, out.kappa[i]);
  }
  const double kappa_eps = kCurvatureZeroFraction * max_kappa;
  for (std::size_t i = 0; i < n; ++i) {
    if (out.kappa[i] < kappa_eps || max_kappa == 0.0) {
      out.tau[i] = 0.0;
      out.curvature_degenerate.push_back(i);
    }
  }
  return out;
}

VertexReport count_vertices(const FrenetProfile& profile) {
  const std::size_t n = profile.size();
  if (n < 4) throw InvalidInput("count_vertices needs a non-trivial profile");
  VertexReport report;
  const double max_kappa =
      *std::max_element(profile.kappa.begin(), profile.kappa.end());
  report.min_kappa =
      *std::min_element(profile.kappa.begin(), profile.kappa.end());
  for (double v : profile.tau)
    report.max_abs_tau = std::max(report.max_abs_tau, std::abs(v));

  const double kappa_eps = kCurvatureZeroFraction * max_kappa;
  std::vector<char> flat(n);
  for (std::size_t i = 0; i < n; ++i)
    flat[i] = profile.kappa[i] < kappa_eps ? 1 : 0;
  report.curvature_zero_count = max_kappa > 0.0 ? cyclic_runs(flat) : 0;

  const double floor = (profile.exact_derivatives ? kPlanarTorsionExact
                                                  : kPlanarTorsionDifferenced) *
                       max_kappa;
  if (report.max_abs_tau <= floor) {
    report.is_planar = true;
    return report;
  }

  const double period = profile.period;
  const auto& t = profile.params;
  report.vertex_params = sign_changes(
      profile.tau, kTorsionHysteresis * report.max_abs_tau,
      [&](std::size_t a, std::size_t b, double fa, double fb) {
        double ta = t[a];
        double tb = t[b];
        if (tb <= ta) tb += period;
        double x = ta + fa / (fa - fb) * (tb - ta);
        return x >= period ? x - period : x;
      });
  report.vertex_count = static_cast<int>(report.vertex_params.size());
  return report;
}

VertexReport count_vertices(const SampledCurve& curve) {
  const std::size_t n = curve.size();
  if (n < 4) throw InvalidInput("count_vertices needs at least 4 samples");
  VertexReport report;

  std::vector<double> kappa(n);
  double max_kappa = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& a = curve.edge(static_cast<std::ptrdiff_t>(i) - 1);
    const Vec3& b = curve.edge(static_cast<std::ptrdiff_t>(i));
    // Menger curvature of (r_{i-1}, r_i, r_{i+1}).
    kappa[i] = 2.0 * norm(cross(a, b)) / (norm(a) * norm(b) * norm(a + b));
    max_kappa = std::max(max_kappa, kappa[i]);
  }
  report.min_kappa = *std::min_element(kappa.begin(), kappa.end());
  std::vector<char> flat(n);
  for (std::size_t i = 0; i < n; ++i)
    flat[i] = kappa[i] < kCurvatureZeroFraction * max_kappa ? 1 : 0;
  report.curvature_zero_count = max_kappa > 0.0 ? cyclic_runs(flat) : 0;

  if (planarity_check(curve).is_planar) {
    report.is_planar = true;
    return report;
  }

  // Torsion sign on edge i, located at i + 1/2.
  std::vector<double> tau(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::ptrdiff_t>(i);
    tau[i] = triple_product(curve.edge(k - 1), curve.edge(k), curve.edge(k + 1));
    report.max_abs_tau = std::max(report.max_abs_tau, std::abs(tau[i]));
  }
  const double period = static_cast<double>(n);
  report.vertex_params = sign_changes(
      tau, kTorsionHysteresis * report.max_abs_tau,
      [&](std::size_t a, std::size_t b, double fa, double fb) {
        double ta = static_cast<double>(a) + 0.5;
        double tb = static_cast<double>(b) + 0.5;
        if (tb <= ta) tb += period;
        double x = ta + fa / (fa - fb) * (tb - ta);
        return x >= period ? x - period : x;
      });
  report.vertex_count = static_cast<int>(report.vertex_params.size());
  return report;
}

PlanarityResult planarity_check(const SampledCurve& curve) {
  const auto pts = curve.points();
  PlanarityResult out;
  Vec3 c{};
  for (const auto& p : pts) c += p;
  c = c / static_cast<double>(pts.size());
  out.centroid = c;

  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& p : pts) {
    const Eigen::Vector3d d(p.x - c.x, p.y - c.y, p.z - c.z);
    cov += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
  const Eigen::Vector3d v = solver.eigenvectors().col(0);
  Vec3 normal{v.x(), v.y(), v.z()};
  normal = normalized(normal);
  // Canonical sign: largest-magnitude component positive.
  const double ax = std::abs(normal.x), ay = std::abs(normal.y),
               az = std::abs(normal.z);
  const double lead = ax >= ay && ax >= az ? normal.x
                      : ay >= az           ? normal.y
                                           : normal.z;
  if (lead < 0) normal = -normal;
  out.plane_normal = normal;

  for (const auto& p : pts)
    out.max_deviation = std::max(out.max_deviation, std::abs(dot(p - c, normal)));
  out.is_planar = out.max_deviation < kPlanarityTolerance * curve.total_length();
  return out;
}

ConvexityResult is_convex_curve(const SampledCurve& curve,
                                const HullMesh& hull) {
  if (hull.input_size != curve.size())
    throw InvalidInput("hull was not built from this curve's samples");
  std::vector<char> extreme(curve.size(), 0);
  for (std::size_t origin : hull.vertex_origin) extreme[origin] = 1;
  ConvexityResult out;
  for (std::size_t i = 0; i < extreme.size(); ++i)
    if (!extreme[i]) out.non_extreme_indices.push_back(i);
  out.convex = out.non_extreme_indices.empty();
  return out;
}

ConvexityResult is_convex_curve(const SampledCurve& curve) {
  const PlanarityResult plane = planarity_check(curve);
  if (!plane.is_planar) return is_convex_curve(curve, build_hull(curve.points()));

  // Monotone chain in the fitted plane; collinear points are not extreme.
  const Vec3 n = plane.plane_normal;
  const Vec3 u = normalized(std::abs(n.x) < 0.9 ? cross(n, Vec3{1, 0, 0})
                                                 : cross(n, Vec3{0, 1, 0}));
  const Vec3 v = cross(n, u);
  const auto pts = curve.points();
  struct P2 {
    double x, y;
    std::size_t index;
  };
  std::vector<P2> flat;
  flat.reserve(pts.size());
  double extent = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vec3 d = pts[i] - plane.centroid;
    flat.push_back({dot(d, u), dot(d, v), i});
    extent = std::max(extent, norm(d));
  }
  std::sort(flat.begin(), flat.end(), [](const P2& a, const P2& b) {
    return a.x < b.x || (a.x == b.x && (a.y < b.y || (a.y == b.y && a.index < b.index)));
  });
  const double eps = kHullTolerance * extent * extent;
  auto turn = [](const P2& o, const P2& a, const P2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  };
  std::vector<P2> chain;
  for (int pass = 0; pass < 2; ++pass) {
    const std::size_t base = chain.size();
    for (const P2& p : flat) {
      while (chain.size() >= base + 2 &&
             turn(chain[chain.size() - 2], chain.back(), p) <= eps)
        chain.pop_back();
      chain.push_back(p);
    }
    chain.pop_back();
    std::reverse(flat.begin(), flat.end());
  }
  std::vector<char> extreme(pts.size(), 0);
  for (const P2& p : chain) extreme[p.index] = 1;
  ConvexityResult out;
  for (std::size_t i = 0; i < extreme.size(); ++i)
    if (!extreme[i]) out.non_extreme_indices.push_back(i);
  out.convex = out.non_extreme_indices.empty();
  return out;
}

}  // namespace dform
