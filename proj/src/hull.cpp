#include "dform/hull.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <string>
#include <unordered_map>

#include "dform/curve.hpp"
#include "dform/errors.hpp"

namespace dform {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct HalfEdge {
  std::size_t end = kNone;
  std::size_t opposite = kNone;
  std::size_t face = kNone;
  std::size_t next = kNone;
};

struct Face {
  std::size_t edge = kNone;
  Plane plane;
  std::vector<std::size_t> outside;
  std::size_t farthest = kNone;
  double farthest_distance = 0.0;
  bool enabled = false;
  bool visible = false;
  std::uint64_t mark = 0;
};

struct HorizonEdge {
  std::size_t from;
  std::size_t to;
  std::size_t opposite;  // half-edge on the hidden side
};

// Incremental quickhull over a half-edge mesh. Points are assigned to the
// first face they lie more than epsilon above; a face's eye point is its
// farthest outside point, ties going to the lowest input index.
class QuickHull {
 public:
  QuickHull(std::span<const Vec3> points, double epsilon)
      : points_(points),
        epsilon_(epsilon),
        slot_(points.size()),
        slot_stamp_(points.size(), 0) {}

  HullMesh run();

 private:
  std::size_t start_of(std::size_t h) const {
    return edges_[edges_[edges_[h].next].next].end;
  }

  std::size_t alloc_edge() {
    if (!free_edges_.empty()) {
      const std::size_t h = free_edges_.back();
      free_edges_.pop_back();
      return h;
    }
    edges_.emplace_back();
    return edges_.size() - 1;
  }

  std::size_t alloc_face() {
    if (!free_faces_.empty()) {
      const std::size_t f = free_faces_.back();
      free_faces_.pop_back();
      return f;
    }
    faces_.emplace_back();
    return faces_.size() - 1;
  }

  std::size_t make_face(std::size_t a, std::size_t b, std::size_t c);
  void add_outside(std::size_t f, std::size_t point, double distance);
  void recompute_farthest(Face& face);
  void build_simplex();
  bool add_point(std::size_t f);

  std::span<const Vec3> points_;
  double epsilon_;
  std::vector<HalfEdge> edges_;
  std::vector<Face> faces_;
  std::vector<std::size_t> free_edges_;
  std::vector<std::size_t> free_faces_;
  std::vector<std::size_t> work_;
  std::uint64_t mark_ = 0;
  std::size_t dropped_ = 0;

  // Scratch reused between iterations.
  std::vector<std::size_t> visible_;
  std::vector<HorizonEdge> horizon_;
  std::vector<std::size_t> orphans_;
  // Horizon edge leaving each vertex, valid where slot_stamp_ == mark_.
  std::vector<std::size_t> slot_;
  std::vector<std::uint64_t> slot_stamp_;
};

std::size_t QuickHull::make_face(std::size_t a, std::size_t b, std::size_t c) {
  const std::size_t f = alloc_face();
  const std::size_t h0 = alloc_edge();
  const std::size_t h1 = alloc_edge();
  const std::size_t h2 = alloc_edge();
  edges_[h0] = {b, kNone, f, h1};
  edges_[h1] = {c, kNone, f, h2};
  edges_[h2] = {a, kNone, f, h0};
  Face& face = faces_[f];
  face.edge = h0;
  face.outside.clear();
  face.farthest = kNone;
  face.farthest_distance = 0.0;
  face.enabled = true;
  face.visible = false;
  face.mark = 0;
  const Vec3& pa = points_[a];
  const Vec3 n = cross(points_[b] - pa, points_[c] - pa);
  const double len = norm(n);
  face.plane.normal = len > 0.0 ? n / len : Vec3{};
  face.plane.offset = -dot(face.plane.normal, pa);
  return f;
}

void QuickHull::add_outside(std::size_t f, std::size_t point, double distance) {
  Face& face = faces_[f];
  face.outside.push_back(point);
  if (face.farthest == kNone || distance > face.farthest_distance) {
    face.farthest = point;
    face.farthest_distance = distance;
  }
}

void QuickHull::recompute_farthest(Face& face) {
  face.farthest = kNone;
  face.farthest_distance = 0.0;
  for (std::size_t p : face.outside) {
    const double d = face.plane.signed_distance(points_[p]);
    if (face.farthest == kNone || d > face.farthest_distance ||
        (d == face.farthest_distance && p < face.farthest)) {
      face.farthest = p;
      face.farthest_distance = d;
    }
  }
}

void QuickHull::build_simplex() {
  const std::size_t n = points_.size();

  std::array<std::size_t, 6> extremes{};
  for (int axis = 0; axis < 3; ++axis) {
    auto coord = [axis](const Vec3& v) {
      return axis == 0 ? v.x : axis == 1 ? v.y : v.z;
    };
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (coord(points_[i]) < coord(points_[lo])) lo = i;
      if (coord(points_[i]) > coord(points_[hi])) hi = i;
    }
    extremes[2 * axis] = lo;
    extremes[2 * axis + 1] = hi;
  }

  std::size_t a = extremes[0], b = extremes[1];
  double best = -1.0;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = i + 1; j < 6; ++j) {
      const double d = norm2(points_[extremes[i]] - points_[extremes[j]]);
      if (d > best) {
        best = d;
        a = extremes[i];
        b = extremes[j];
      }
    }
  if (std::sqrt(best) <= epsilon_)
    throw DegenerateHullError("all points coincide");

  const Vec3 axis = normalized(points_[b] - points_[a]);
  std::size_t c = kNone;
  best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 d = points_[i] - points_[a];
    const double dist2 = norm2(d - dot(d, axis) * axis);
    if (dist2 > best) {
      best = dist2;
      c = i;
    }
  }
  if (std::sqrt(best) <= epsilon_)
    throw DegenerateHullError("all points are collinear");

  const Vec3 normal =
      normalized(cross(points_[b] - points_[a], points_[c] - points_[a]));
  std::size_t d = kNone;
  best = -1.0;
  double signed_best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = dot(normal, points_[i] - points_[a]);
    if (std::abs(s) > best) {
      best = std::abs(s);
      signed_best = s;
      d = i;
    }
  }
  if (best <= epsilon_)
    throw DegenerateHullError(
        "all points are coplanar (max out-of-plane distance " +
        std::to_string(best) + ")");
  if (signed_best > 0) std::swap(b, c);

  // (a, b, c) now has d strictly below it.
  const std::array<std::size_t, 4> tetra_faces = {
      make_face(a, b, c), make_face(b, a, d), make_face(c, b, d),
      make_face(a, c, d)};
  std::vector<std::size_t> hs;
  for (std::size_t f : tetra_faces) {
    const std::size_t h = faces_[f].edge;
    hs.insert(hs.end(), {h, edges_[h].next, edges_[edges_[h].next].next});
  }
  for (std::size_t h : hs)
    for (std::size_t g : hs)
      if (start_of(h) == edges_[g].end && edges_[h].end == start_of(g))
        edges_[h].opposite = g;

  for (std::size_t i = 0; i < n; ++i) {
    if (i == a || i == b || i == c || i == d) continue;
    for (std::size_t f : tetra_faces) {
      const double dist = faces_[f].plane.signed_distance(points_[i]);
      if (dist > epsilon_) {
        add_outside(f, i, dist);
        break;
      }
    }
  }
  for (std::size_t f : tetra_faces)
    if (!faces_[f].outside.empty()) work_.push_back(f);
}

bool QuickHull::add_point(std::size_t f) {
  const std::size_t eye = faces_[f].farthest;
  const Vec3& p = points_[eye];
  ++mark_;

  visible_.clear();
  visible_.push_back(f);
  faces_[f].mark = mark_;
  faces_[f].visible = true;
  for (std::size_t k = 0; k < visible_.size(); ++k) {
    const std::size_t g = visible_[k];
    std::size_t h = faces_[g].edge;
    for (int e = 0; e < 3; ++e, h = edges_[h].next) {
      const std::size_t nb = edges_[edges_[h].opposite].face;
      Face& other = faces_[nb];
      if (other.mark == mark_) continue;
      other.mark = mark_;
      other.visible = other.plane.signed_distance(p) > 0.0;
      if (other.visible) visible_.push_back(nb);
    }
  }

  horizon_.clear();
  for (std::size_t g : visible_) {
    std::size_t h = faces_[g].edge;
    for (int e = 0; e < 3; ++e, h = edges_[h].next) {
      const std::size_t opp = edges_[h].opposite;
      if (!faces_[edges_[opp].face].visible)
        horizon_.push_back({start_of(h), edges_[h].end, opp});
    }
  }

  // The horizon must be a single simple loop.
  const std::size_t k = horizon_.size();
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t v = horizon_[i].from;
    if (slot_stamp_[v] == mark_) return false;
    slot_stamp_[v] = mark_;
    slot_[v] = i;
  }
  std::vector<HorizonEdge> loop;
  loop.reserve(k);
  loop.push_back(horizon_[0]);
  while (loop.size() < k) {
    const std::size_t v = loop.back().to;
    if (slot_stamp_[v] != mark_) return false;
    loop.push_back(horizon_[slot_[v]]);
  }
  if (loop.back().to != loop.front().from) return false;

  orphans_.clear();
  for (std::size_t g : visible_) {
    Face& face = faces_[g];
    for (std::size_t q : face.outside)
      if (q != eye) orphans_.push_back(q);
    face.outside.clear();
    face.outside.shrink_to_fit();
    face.enabled = false;
    std::size_t h = face.edge;
    for (int e = 0; e < 3; ++e) {
      const std::size_t nx = edges_[h].next;
      free_edges_.push_back(h);
      h = nx;
    }
    free_faces_.push_back(g);
  }
  // Hidden faces are marked with the current stamp; clear their flag so the
  // next iteration starts clean.
  for (const auto& e : loop) faces_[edges_[e.opposite].face].visible = false;

  std::vector<std::size_t> created(k);
  for (std::size_t i = 0; i < k; ++i) {
    created[i] = make_face(loop[i].from, loop[i].to, eye);
    const std::size_t h0 = faces_[created[i]].edge;
    edges_[h0].opposite = loop[i].opposite;
    edges_[loop[i].opposite].opposite = h0;
  }
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t h1 = edges_[faces_[created[i]].edge].next;
    const std::size_t next_face = created[(i + 1) % k];
    const std::size_t h2 = edges_[edges_[faces_[next_face].edge].next].next;
    edges_[h1].opposite = h2;
    edges_[h2].opposite = h1;
  }

  for (std::size_t q : orphans_) {
    for (std::size_t nf : created) {
      const double dist = faces_[nf].plane.signed_distance(points_[q]);
      if (dist > epsilon_) {
        add_outside(nf, q, dist);
        break;
      }
    }
  }
  for (std::size_t nf : created)
    if (!faces_[nf].outside.empty()) work_.push_back(nf);
  return true;
}

HullMesh QuickHull::run() {
  build_simplex();
  while (!work_.empty()) {
    const std::size_t f = work_.back();
    work_.pop_back();
    if (!faces_[f].enabled || faces_[f].outside.empty()) continue;
    if (!add_point(f)) {
      // Numerically inconsistent visibility; give up on this eye point.
      Face& face = faces_[f];
      face.outside.erase(
          std::find(face.outside.begin(), face.outside.end(), face.farthest));
      recompute_farthest(face);
      ++dropped_;
      // add_point returned before touching any flags except marks.
      for (std::size_t g : visible_) faces_[g].visible = false;
      if (!face.outside.empty()) work_.push_back(f);
    }
  }

  HullMesh mesh;
  mesh.input_size = points_.size();
  mesh.epsilon = epsilon_;
  mesh.dropped_points = dropped_;

  std::vector<std::size_t> used;
  for (const Face& face : faces_) {
    if (!face.enabled) continue;
    std::size_t h = face.edge;
    for (int e = 0; e < 3; ++e, h = edges_[h].next) used.push_back(edges_[h].end);
  }
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  std::unordered_map<std::size_t, std::uint32_t> remap;
  remap.reserve(used.size());
  for (std::size_t i = 0; i < used.size(); ++i) {
    remap[used[i]] = static_cast<std::uint32_t>(i);
    mesh.vertices.push_back(points_[used[i]]);
  }
  mesh.vertex_origin = std::move(used);

  for (const Face& face : faces_) {
    if (!face.enabled) continue;
    const std::size_t h0 = face.edge;
    const std::size_t h1 = edges_[h0].next;
    const std::size_t h2 = edges_[h1].next;
    // h2 ends at the face's first vertex.
    mesh.facets.push_back(
        {remap[edges_[h2].end], remap[edges_[h0].end], remap[edges_[h1].end]});
    mesh.planes.push_back(face.plane);
  }
  return mesh;
}

}  // namespace

Vec3 HullMesh::centroid() const {
  Vec3 c{};
  for (const auto& v : vertices) c += v;
  return vertices.empty() ? c : c / static_cast<double>(vertices.size());
}

HullMesh build_hull(std::span<const Vec3> points) {
  if (points.size() < 4)
    throw InvalidInput("a 3D hull needs at least 4 points, got " +
                       std::to_string(points.size()));
  Vec3 lo = points[0], hi = points[0];
  for (const auto& p : points) {
    if (!is_finite(p)) throw InvalidInput("hull input contains a non-finite point");
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  const double epsilon = kHullTolerance * norm(hi - lo);
  return QuickHull(points, epsilon).run();
}

double mesh_volume(const HullMesh& mesh) {
  const Vec3 c = mesh.centroid();
  double sum = 0.0;
  for (const auto& f : mesh.facets)
    sum += triple_product(mesh.vertices[f[0]] - c, mesh.vertices[f[1]] - c,
                          mesh.vertices[f[2]] - c);
  return sum / 6.0;
}

double mesh_area(const HullMesh& mesh) {
  double sum = 0.0;
  for (const auto& f : mesh.facets) {
    const Vec3& a = mesh.vertices[f[0]];
    sum += norm(cross(mesh.vertices[f[1]] - a, mesh.vertices[f[2]] - a));
  }
  return 0.5 * sum;
}

double max_plane_distance(const HullMesh& mesh, const Vec3& p) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& plane : mesh.planes)
    worst = std::max(worst, plane.signed_distance(p));
  return worst;
}

Containment contains(const HullMesh& mesh, const Vec3& p) {
  const double s = max_plane_distance(mesh, p);
  if (s > mesh.epsilon) return {Containment::Kind::Outside, s};
  if (s >= -mesh.epsilon) return {Containment::Kind::OnBoundary, std::abs(s)};
  return {Containment::Kind::Inside, -s};
}

MeshCheck check_mesh(const HullMesh& mesh) {
  MeshCheck out;
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> directed;
  for (const auto& f : mesh.facets)
    for (int e = 0; e < 3; ++e) ++directed[{f[e], f[(e + 1) % 3]}];
  bool watertight = true;
  std::size_t undirected = 0;
  for (const auto& [key, count] : directed) {
    if (count != 1) watertight = false;
    auto rev = directed.find({key.second, key.first});
    if (rev == directed.end() || rev->second != 1) watertight = false;
    if (key.first < key.second) ++undirected;
  }
  out.watertight = watertight;
  out.euler_characteristic = static_cast<int>(mesh.vertices.size()) -
                             static_cast<int>(undirected) +
                             static_cast<int>(mesh.facets.size());
  const Vec3 c = mesh.centroid();
  out.outward = std::all_of(mesh.planes.begin(), mesh.planes.end(),
                            [&](const Plane& pl) {
                              return pl.signed_distance(c) < 0.0;
                            });
  return out;
}

std::size_t support_separation(std::size_t n) {
  return std::min<std::size_t>(2, n / 12);
}

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t a) {
  while (parent[a] != a) {
    parent[a] = parent[parent[a]];
    a = parent[a];
  }
  return a;
}

// True if the sorted cyclic index set holds three entries that are pairwise
// more than `sep` apart on a cycle of length n.
bool has_separated_triple(const std::vector<std::size_t>& idx, std::size_t n,
                          std::size_t sep) {
  const std::size_t k = idx.size();
  if (k < 3) return false;
  for (std::size_t s = 0; s < k; ++s) {
    const std::size_t a = idx[s];
    std::size_t step = 0;
    std::size_t last = a;
    for (std::size_t t = 1; t < k && step < 2; ++t) {
      const std::size_t c = idx[(s + t) % k];
      const std::size_t forward = (c + n - last) % n;
      if (forward > sep) {
        last = c;
        ++step;
      }
    }
    if (step == 2 && (a + n - last) % n > sep) return true;
  }
  return false;
}

}  // namespace

SupportPolygonReport support_polygons(const HullMesh& mesh,
                                      const SampledCurve& curve) {
  if (mesh.input_size != curve.size())
    throw InvalidInput("hull was not built from this curve's samples");
  constexpr double kAngleTolerance = 1e-6;

  const std::size_t nf = mesh.facets.size();
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> owner;
  for (std::size_t f = 0; f < nf; ++f)
    for (int e = 0; e < 3; ++e)
      owner[{mesh.facets[f][e], mesh.facets[f][(e + 1) % 3]}] = f;

  std::vector<std::size_t> parent(nf);
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t f = 0; f < nf; ++f) {
    for (int e = 0; e < 3; ++e) {
      auto it = owner.find({mesh.facets[f][(e + 1) % 3], mesh.facets[f][e]});
      if (it == owner.end()) continue;
      const Plane& p = mesh.planes[f];
      const Plane& q = mesh.planes[it->second];
      const bool parallel = dot(p.normal, q.normal) > 0.0 &&
                            norm(cross(p.normal, q.normal)) < kAngleTolerance;
      if (parallel && std::abs(p.offset - q.offset) < mesh.epsilon)
        parent[find_root(parent, f)] = find_root(parent, it->second);
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t f = 0; f < nf; ++f) {
    auto& g = groups[find_root(parent, f)];
    for (auto v : mesh.facets[f]) g.push_back(mesh.vertex_origin[v]);
  }

  SupportPolygonReport out;
  out.separation = support_separation(curve.size());
  for (auto& [root, samples] : groups) {
    std::sort(samples.begin(), samples.end());
    samples.erase(std::unique(samples.begin(), samples.end()), samples.end());
    if (has_separated_triple(samples, curve.size(), out.separation))
      out.polygons.push_back(samples);
  }
  out.polygon_count = static_cast<int>(out.polygons.size());
  return out;
}

InequalityReport four_vertex_inequality_report(const VertexReport& report,
                                               const SupportPolygonReport& sp) {
  if (report.degenerate())
    throw InvalidInput(
        "four-vertex inequality needs a non-planar curve (vertex count is "
        "undefined for planar curves)");
  InequalityReport out;
  out.slack = report.vertex_count + 2 * report.curvature_zero_count - 4 -
              sp.polygon_count;
  out.satisfied = out.slack >= 0;
  return out;
}

void write_obj(std::ostream& os, const HullMesh& mesh) {
  char buf[128];
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.x, v.y, v.z);
    os << buf;
  }
  for (const auto& f : mesh.facets) {
    std::snprintf(buf, sizeof buf, "f %u %u %u\n", f[0] + 1, f[1] + 1, f[2] + 1);
    os << buf;
  }
}

}  // namespace dform
