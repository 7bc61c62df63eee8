#include "dform/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "dform/hull.hpp"
#include "parallel.hpp"

namespace dform {

const char* to_string(VolumeMethod m) {
  switch (m) {
    case VolumeMethod::DoubleSum:
      return "double_sum";
    case VolumeMethod::OracleHull:
      return "oracle_hull";
  }
  return "?";
}

const char* to_string(PairClassification::Kind k) {
  switch (k) {
    case PairClassification::Kind::Interior:
      return "interior";
    case PairClassification::Kind::Boundary:
      return "boundary";
    case PairClassification::Kind::Degenerate:
      return "degenerate";
  }
  return "?";
}

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kLeaf = 8;
  if (values.size() <= kLeaf) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double planar_area_integral(const SampledCurve& curve) {
  const PlanarityResult plane = planarity_check(curve);
  if (!plane.is_planar) {
    std::ostringstream msg;
    msg << "area needs a planar curve; max deviation from the best-fit plane is "
        << plane.max_deviation;
    throw PlanarityError(msg.str(), plane.max_deviation);
  }
  const auto pts = curve.points();
  const std::size_t n = pts.size();
  Vec3 sum{};
  for (std::size_t i = 0; i < n; ++i)
    sum += cross(pts[i] - plane.centroid, pts[(i + 1) % n] - plane.centroid);
  return 0.5 * norm(sum);
}

double abs_tetra_double_sum(std::span<const Vec3> points, unsigned threads) {
  const std::size_t n = points.size();
  std::vector<Vec3> edges(n);
  for (std::size_t i = 0; i < n; ++i) edges[i] = points[(i + 1) % n] - points[i];

  std::vector<double> rows(n);
  detail::parallel_blocks(n, threads, [&](std::size_t begin, std::size_t end,
                                          std::size_t) {
    std::vector<double> row(n);
    for (std::size_t i = begin; i < end; ++i) {
      const Vec3& ri = points[i];
      const Vec3& ei = edges[i];
      for (std::size_t j = 0; j < n; ++j)
        row[j] = std::abs(triple_product(ei, points[j] - ri, edges[j]));
      rows[i] = pairwise_sum(row);
    }
  });
  return pairwise_sum(rows) / 6.0;
}

VolumeResult hull_volume(const SampledCurve& curve,
                         const VolumeOptions& options) {
  if (options.multiplicity < 1)
    throw InvalidInput("multiplicity m must be >= 1, got " +
                       std::to_string(options.multiplicity));
  if (options.multiplicity != 4 && !options.allow_nondefault_multiplicity)
    throw InvalidInput("multiplicity m = " +
                       std::to_string(options.multiplicity) +
                       " requires an explicit override (four-vertex curves "
                       "use m = 4)");

  const PlanarityResult plane = planarity_check(curve);
  if (plane.is_planar) {
    std::ostringstream msg;
    msg << "curve is planar (max deviation " << plane.max_deviation
        << "); use the area formula instead";
    throw PlanarityError(msg.str(), plane.max_deviation);
  }

  VolumeResult out;
  if (!options.override_vertex_gate) {
    VertexReport report =
        options.vertex_report ? *options.vertex_report : count_vertices(curve);
    if (report.degenerate() || report.vertex_count != 4) {
      std::ostringstream msg;
      msg << "volume formula requires exactly 4 vertices, curve has "
          << report.vertex_count;
      throw HypothesisError(msg.str(), std::move(report));
    }
  } else {
    out.unverified_hypothesis = true;
  }

  const double m = static_cast<double>(options.multiplicity);
  out.n = curve.size();
  out.multiplicity_m = options.multiplicity;
  out.method = VolumeMethod::DoubleSum;
  out.volume = abs_tetra_double_sum(curve.points(), options.threads) / m;
  if (options.estimate_error && curve.size() % 2 == 0 && curve.size() >= 16) {
    const SampledCurve half = curve.every_other();
    const double coarse = abs_tetra_double_sum(half.points(), options.threads) / m;
    out.error_estimate = std::abs(out.volume - coarse);
  }
  return out;
}

PairClassification classify_adjacent_pair(const SampledCurve& curve,
                                          std::size_t i, std::size_t j) {
  const std::size_t n = curve.size();
  if (i >= n || j >= n)
    throw InvalidInput("pair index out of range: (" + std::to_string(i) + ", " +
                       std::to_string(j) + ") with n = " + std::to_string(n));
  const auto si = static_cast<std::ptrdiff_t>(i);
  const auto sj = static_cast<std::ptrdiff_t>(j);
  PairClassification out;
  out.i = i;
  out.j = j;
  out.volume_ij = signed_tetra_volume(curve.point(si), curve.point(si + 1),
                                      curve.point(sj), curve.point(sj + 1));
  out.volume_next = signed_tetra_volume(curve.point(si + 1), curve.point(si + 2),
                                        curve.point(sj), curve.point(sj + 1));
  out.shared_face_triangle = {curve.point(si + 1), curve.point(sj),
                              curve.point(sj + 1)};
  const double length = curve.total_length();
  const double threshold = kDegenerateVolumeFraction * length * length * length;
  using Kind = PairClassification::Kind;
  if (std::abs(out.volume_ij) < threshold ||
      std::abs(out.volume_next) < threshold)
    out.kind = Kind::Degenerate;
  else if ((out.volume_ij > 0) == (out.volume_next > 0))
    out.kind = Kind::Interior;
  else
    out.kind = Kind::Boundary;
  return out;
}

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t a) {
  while (parent[a] != a) {
    parent[a] = parent[parent[a]];
    a = parent[a];
  }
  return a;
}

}  // namespace

CoveringEstimate estimate_covering_multiplicity(const SampledCurve& curve,
                                                const HullMesh& hull,
                                                const Vec3& p,
                                                unsigned threads) {
  const Containment where = contains(hull, p);
  if (where.kind != Containment::Kind::Inside) {
    std::ostringstream msg;
    msg << "probe " << p << " is "
        << (where.kind == Containment::Kind::Outside ? "outside" : "on")
        << " the hull";
    throw OutsideHullError(msg.str(), max_plane_distance(hull, p));
  }

  const auto pts = curve.points();
  const std::size_t n = pts.size();
  const double length = curve.total_length();
  CoveringEstimate out;
  out.margin = where.margin;
  out.near_boundary = where.margin < kProbeMarginFraction * length;
  out.chord_tolerance = kChordToleranceEdges * length / static_cast<double>(n);
  const double tol2 = out.chord_tolerance * out.chord_tolerance;

  using Hit = std::pair<std::uint32_t, std::uint32_t>;
  const std::size_t blocks = std::max<std::size_t>(1, std::min<std::size_t>(threads, n));
  std::vector<std::vector<Hit>> partial(blocks);
  detail::parallel_blocks(n, threads, [&](std::size_t begin, std::size_t end,
                                          std::size_t block) {
    auto& hits = partial[block];
    for (std::size_t i = begin; i < end; ++i) {
      const Vec3 w = p - pts[i];
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const Vec3 d = pts[j] - pts[i];
        const double t = std::clamp(dot(w, d) / norm2(d), 0.0, 1.0);
        if (norm2(w - t * d) < tol2)
          hits.emplace_back(static_cast<std::uint32_t>(i),
                            static_cast<std::uint32_t>(j));
      }
    }
  });
  std::vector<Hit> hits;
  for (auto& part : partial) hits.insert(hits.end(), part.begin(), part.end());
  out.hits = hits.size();
  if (hits.empty()) return out;

  auto key = [](std::uint32_t i, std::uint32_t j) {
    return (static_cast<std::uint64_t>(i) << 32) | j;
  };
  std::unordered_map<std::uint64_t, std::size_t> index;
  index.reserve(hits.size() * 2);
  for (std::size_t h = 0; h < hits.size(); ++h)
    index[key(hits[h].first, hits[h].second)] = h;

  std::vector<std::size_t> parent(hits.size());
  std::iota(parent.begin(), parent.end(), 0);
  const auto gap = static_cast<std::int64_t>(kClusterGap);
  const auto ni = static_cast<std::int64_t>(n);
  for (std::size_t h = 0; h < hits.size(); ++h) {
    for (std::int64_t di = -gap; di <= gap; ++di) {
      for (std::int64_t dj = -gap; dj <= gap; ++dj) {
        const auto i = static_cast<std::uint32_t>(
            ((hits[h].first + di) % ni + ni) % ni);
        const auto j = static_cast<std::uint32_t>(
            ((hits[h].second + dj) % ni + ni) % ni);
        auto it = index.find(key(i, j));
        if (it != index.end())
          parent[find_root(parent, h)] = find_root(parent, it->second);
      }
    }
  }
  int clusters = 0;
  for (std::size_t h = 0; h < hits.size(); ++h)
    if (find_root(parent, h) == h) ++clusters;
  out.multiplicity = clusters;
  return out;
}

}  // namespace dform
