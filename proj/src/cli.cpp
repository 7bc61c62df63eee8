#include "dform/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "dform/curve.hpp"
#include "dform/errors.hpp"
#include "dform/gallery.hpp"
#include "dform/hull.hpp"
#include "dform/quadrature.hpp"

namespace dform::cli {

using Json = nlohmann::ordered_json;

namespace {

constexpr int kSchemaVersion = 1;

class IoError : public Error {
 public:
  using Error::Error;
};

/// A validity gate failed; carries the gate name and what was measured.
class GateFailure : public Error {
 public:
  GateFailure(std::string gate, const std::string& message, Json measured)
      : Error(message), gate_(std::move(gate)), measured_(std::move(measured)) {}
  const std::string& gate() const { return gate_; }
  const Json& measured() const { return measured_; }

 private:
  std::string gate_;
  Json measured_;
};

std::string format_double(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

Json json_number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

Json to_json(const Vec3& v) { return Json::array({v.x, v.y, v.z}); }

class Stopwatch {
 public:
  void start() { t0_ = std::chrono::steady_clock::now(); }
  double stop(const std::string& phase) {
    const auto dt = std::chrono::steady_clock::now() - t0_;
    const double ms = std::chrono::duration<double, std::milli>(dt).count();
    phases_[phase] += ms;
    return ms;
  }
  Json json() const {
    Json j = Json::object();
    for (const auto& [k, v] : phases_) j[k] = v;
    return j;
  }

 private:
  std::chrono::steady_clock::time_point t0_;
  std::map<std::string, double> phases_;
};

// Curve input: a gallery entry or the points of a polyline file.
struct CurveInput {
  std::string name;
  std::optional<AnalyticCurve> analytic;
  std::vector<Vec3> polyline;

  bool is_polyline() const { return !analytic.has_value(); }

  SampledCurve samples(std::size_t n) const {
    if (analytic) return sample_uniform(*analytic, n);
    return SampledCurve::from_points(polyline);
  }

  VertexReport vertices(const SampledCurve& s) const {
    if (analytic) return count_vertices(frenet_profile(*analytic, std::max<std::size_t>(s.size(), 4)));
    return count_vertices(s);
  }

  const char* vertex_method() const {
    return analytic ? "frenet torsion" : "discrete torsion";
  }

  double oracle_volume(std::size_t oracle_samples) const {
    if (analytic)
      return mesh_volume(build_hull(sample_uniform(*analytic, oracle_samples).points()));
    return mesh_volume(build_hull(polyline));
  }
};

CurveInput load_curve(const std::string& spec) {
  if (std::filesystem::is_regular_file(spec)) {
    CurveInput c;
    c.name = spec;
    c.polyline = read_polyline(spec);
    return c;
  }
  auto entry = gallery::get(spec);
  CurveInput c;
  c.name = entry.name;
  c.analytic = std::move(entry.curve);
  return c;
}

Json vertex_json(const VertexReport& r, const char* method) {
  Json j;
  j["method"] = method;
  j["vertex_count"] = r.vertex_count;
  j["curvature_zero_count"] = r.curvature_zero_count;
  j["is_planar"] = r.is_planar;
  j["vertex_params"] = r.vertex_params;
  j["min_kappa"] = json_number(r.min_kappa);
  j["max_abs_tau"] = json_number(r.max_abs_tau);
  return j;
}

Json volume_json(const VolumeResult& v) {
  Json j;
  j["volume"] = json_number(v.volume);
  j["error_estimate"] = json_number(v.error_estimate);
  j["method"] = to_string(v.method);
  j["multiplicity_m"] = v.multiplicity_m;
  return j;
}

Json header(const char* command, const CurveInput& curve, std::size_t n) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["command"] = command;
  j["curve_name"] = curve.name;
  j["n"] = n;
  return j;
}

void planarity_gate(const SampledCurve& s) {
  const PlanarityResult plane = planarity_check(s);
  if (!plane.is_planar) return;
  Json m;
  m["max_deviation"] = plane.max_deviation;
  m["tolerance"] = kPlanarityTolerance * s.total_length();
  m["plane_normal"] = to_json(plane.plane_normal);
  throw GateFailure("planarity",
                    "curve is planar (max deviation " +
                        format_double(plane.max_deviation) +
                        "); the enclosed area is available via the 'area' command",
                    std::move(m));
}

void vertex_gate(const VertexReport& r) {
  if (r.vertex_count == 4) return;
  Json m;
  m["vertex_count"] = r.vertex_count;
  m["expected"] = 4;
  m["vertex_params"] = r.vertex_params;
  throw GateFailure("vertex_count",
                    "curve has V = " + std::to_string(r.vertex_count) +
                        " torsion sign changes, the formula needs exactly 4 "
                        "(use --force to compute anyway)",
                    std::move(m));
}

void convexity_gate(const ConvexityResult& c) {
  if (c.convex) return;
  Json m;
  m["non_extreme_count"] = c.non_extreme_indices.size();
  m["non_extreme_indices"] = c.non_extreme_indices;
  throw GateFailure("convexity",
                    std::to_string(c.non_extreme_indices.size()) +
                        " samples are not hull vertices (use --skip-convexity "
                        "to compute anyway)",
                    std::move(m));
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

struct CommonOptions {
  std::string spec;
  std::size_t n = 1000;
  int m = 4;
  bool force = false;
  bool skip_convexity = false;
  unsigned threads = 1;
  bool timing = false;
  std::size_t oracle_samples = kOracleSamples;
};

// Result of the gated formula pipeline for one n.
struct FormulaRun {
  SampledCurve samples;
  VertexReport vertices;
  std::optional<bool> convex;
  VolumeResult volume;
};

FormulaRun gated_formula(const CurveInput& curve, const CommonOptions& o,
                         std::size_t n, Json* report, Stopwatch& sw) {
  sw.start();
  SampledCurve s = curve.samples(n);
  sw.stop("sample");
  if (report) (*report)["n"] = s.size();

  planarity_gate(s);

  sw.start();
  VertexReport vr = curve.vertices(s);
  sw.stop("vertex_gate");
  if (report) (*report)["vertex_report"] = vertex_json(vr, curve.vertex_method());
  if (!o.force) vertex_gate(vr);

  std::optional<bool> convex;
  if (!o.skip_convexity) {
    sw.start();
    const ConvexityResult c = is_convex_curve(s);
    sw.stop("convexity");
    convex = c.convex;
    if (report) (*report)["convexity"] = c.convex;
    convexity_gate(c);
  }

  VolumeOptions vo;
  vo.multiplicity = o.m;
  vo.allow_nondefault_multiplicity = true;
  vo.override_vertex_gate = o.force;
  vo.vertex_report = vr;
  vo.threads = resolve_threads(o.threads);
  sw.start();
  VolumeResult v = hull_volume(s, vo);
  sw.stop("formula");
  return {std::move(s), std::move(vr), convex, v};
}

void report_gate(Json& report, const GateFailure& g, std::ostream& err) {
  report["status"] = "gate_failed";
  Json f;
  f["gate"] = g.gate();
  f["message"] = g.what();
  f["measured"] = g.measured();
  report["failed_gate"] = std::move(f);
  err << "gate '" << g.gate() << "' failed: " << g.what() << '\n';
}

void add_common_flags(CLI::App* cmd, CommonOptions& o, bool with_n = true) {
  cmd->add_option("curve", o.spec, "gallery name (family:key=value,...) or polyline file")
      ->required();
  if (with_n) cmd->add_option("--n", o.n, "number of samples")->check(CLI::Range(3, 1 << 24));
  cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)");
}

void add_gate_flags(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--m", o.m, "covering multiplicity divisor")->check(CLI::PositiveNumber);
  cmd->add_flag("--force", o.force, "compute even when the curve does not have 4 vertices");
  cmd->add_flag("--skip-convexity", o.skip_convexity, "skip the extreme-point check");
  cmd->add_option("--oracle-samples", o.oracle_samples, "samples for the hull cross-check")
      ->check(CLI::Range(4, 1 << 24));
}

// volume ----------------------------------------------------------------

int cmd_volume(const CommonOptions& o, bool verify, std::ostream& out,
               std::ostream& err) {
  const CurveInput curve = load_curve(o.spec);
  Stopwatch sw;
  Json report = header("volume", curve, o.n);
  report["m"] = o.m;
  report["status"] = "ok";
  report["failed_gate"] = nullptr;
  report["vertex_report"] = nullptr;
  report["convexity"] = nullptr;
  report["formula_volume"] = nullptr;
  report["unverified_hypothesis"] = false;
  report["oracle_volume"] = nullptr;
  report["relative_gap"] = nullptr;
  report["multiplicity_histogram"] = Json::object();

  int code = kExitOk;
  try {
    const FormulaRun run = gated_formula(curve, o, o.n, &report, sw);
    report["formula_volume"] = volume_json(run.volume);
    report["unverified_hypothesis"] = run.volume.unverified_hypothesis;
    if (verify) {
      sw.start();
      const double oracle = curve.oracle_volume(o.oracle_samples);
      sw.stop("oracle");
      report["oracle_volume"] = oracle;
      if (oracle > 0)
        report["relative_gap"] = std::abs(run.volume.volume - oracle) / oracle;
    }
  } catch (const GateFailure& g) {
    report_gate(report, g, err);
    code = kExitGateFailed;
  }
  if (o.timing) report["timing_ms"] = sw.json();
  out << report.dump(2) << '\n';
  return code;
}

// area ------------------------------------------------------------------

int cmd_area(const CommonOptions& o, std::ostream& out, std::ostream& err) {
  const CurveInput curve = load_curve(o.spec);
  const SampledCurve s = curve.samples(o.n);
  Json report = header("area", curve, s.size());
  const PlanarityResult plane = planarity_check(s);
  report["max_deviation"] = plane.max_deviation;
  report["plane_normal"] = to_json(plane.plane_normal);
  if (!plane.is_planar) {
    Json m;
    m["max_deviation"] = plane.max_deviation;
    m["tolerance"] = kPlanarityTolerance * s.total_length();
    report_gate(report,
                GateFailure("planarity",
                            "curve is not planar (max deviation " +
                                format_double(plane.max_deviation) + ")",
                            std::move(m)),
                err);
    report["area"] = nullptr;
    out << report.dump(2) << '\n';
    return kExitGateFailed;
  }
  report["status"] = "ok";
  report["area"] = planar_area_integral(s);
  out << report.dump(2) << '\n';
  return kExitOk;
}

// converge --------------------------------------------------------------

int cmd_converge(const CommonOptions& o, const std::vector<std::size_t>& ns,
                 bool as_json, std::ostream& out, std::ostream& err) {
  if (ns.empty()) throw InvalidInput("converge needs a non-empty --n list");
  for (std::size_t n : ns)
    if (n < 3) throw InvalidInput("every n must be at least 3");
  const CurveInput curve = load_curve(o.spec);

  struct Row {
    std::size_t n;
    double formula, oracle, gap, seconds;
  };
  std::vector<Row> rows;
  std::optional<double> oracle;
  try {
    for (std::size_t n : ns) {
      Stopwatch sw;
      const auto t0 = std::chrono::steady_clock::now();
      const FormulaRun run = gated_formula(curve, o, n, nullptr, sw);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (!oracle) oracle = curve.oracle_volume(o.oracle_samples);
      const double gap = std::abs(run.volume.volume - *oracle) / *oracle;
      rows.push_back({run.samples.size(), run.volume.volume, *oracle, gap, secs});
    }
  } catch (const GateFailure& g) {
    err << "gate '" << g.gate() << "' failed: " << g.what() << '\n';
    return kExitGateFailed;
  }

  if (as_json) {
    Json report = header("converge", curve, ns.back());
    report.erase("n");
    Json arr = Json::array();
    for (const Row& r : rows)
      arr.push_back({{"n", r.n},
                     {"formula_volume", r.formula},
                     {"oracle_volume", r.oracle},
                     {"relative_gap", r.gap},
                     {"seconds", r.seconds}});
    report["rows"] = std::move(arr);
    out << report.dump(2) << '\n';
  } else {
    out << "n,formula_volume,oracle_volume,relative_gap,seconds\n";
    char secs[32];
    for (const Row& r : rows) {
      std::snprintf(secs, sizeof secs, "%.6f", r.seconds);
      out << r.n << ',' << format_double(r.formula) << ','
          << format_double(r.oracle) << ',' << format_double(r.gap) << ','
          << secs << '\n';
    }
  }
  return kExitOk;
}

// diagnose --------------------------------------------------------------

struct DiagnoseOptions {
  std::size_t probes = 100;
  std::uint64_t seed = 42;
  std::vector<double> probe_point;
  std::size_t grid = 100;
};

int cmd_diagnose(const CommonOptions& o, const DiagnoseOptions& d,
                 std::ostream& out, std::ostream& err) {
  const CurveInput curve = load_curve(o.spec);
  const unsigned threads = resolve_threads(o.threads);
  Stopwatch sw;
  Json report = header("diagnose", curve, o.n);
  report["seed"] = d.seed;
  report["probes_requested"] = d.probes;

  sw.start();
  const SampledCurve s = curve.samples(o.n);
  sw.stop("sample");
  report["n"] = s.size();
  try {
    planarity_gate(s);
  } catch (const GateFailure& g) {
    report_gate(report, g, err);
    out << report.dump(2) << '\n';
    return kExitGateFailed;
  }
  report["status"] = "ok";

  const VertexReport vr = curve.vertices(s);
  report["vertex_report"] = vertex_json(vr, curve.vertex_method());

  sw.start();
  const HullMesh hull = build_hull(s.points());
  sw.stop("hull");

  // Multiplicity histogram over seeded interior probes.
  sw.start();
  Vec3 lo = hull.vertices.front(), hi = lo;
  for (const Vec3& v : hull.vertices) {
    lo = {std::min(lo.x, v.x), std::min(lo.y, v.y), std::min(lo.z, v.z)};
    hi = {std::max(hi.x, v.x), std::max(hi.y, v.y), std::max(hi.z, v.z)};
  }
  ProbeRng rng(d.seed);
  std::map<int, int> histogram;
  Json near_boundary = Json::array();
  std::size_t accepted = 0, rejected_outside = 0, off_four = 0;
  const std::size_t max_draws = 1000 * std::max<std::size_t>(d.probes, 1);
  for (std::size_t draw = 0; accepted < d.probes && draw < max_draws; ++draw) {
    const Vec3 p{lo.x + (hi.x - lo.x) * rng.next_unit(),
                 lo.y + (hi.y - lo.y) * rng.next_unit(),
                 lo.z + (hi.z - lo.z) * rng.next_unit()};
    if (contains(hull, p).kind != Containment::Kind::Inside) {
      ++rejected_outside;
      continue;
    }
    CoveringEstimate est;
    try {
      est = estimate_covering_multiplicity(s, hull, p, threads);
    } catch (const OutsideHullError&) {
      ++rejected_outside;
      continue;
    }
    ++histogram[est.multiplicity];
    if (est.near_boundary) {
      near_boundary.push_back({{"probe", accepted},
                               {"point", to_json(p)},
                               {"multiplicity", est.multiplicity},
                               {"margin", est.margin}});
    } else if (est.multiplicity != 4) {
      ++off_four;
    }
    ++accepted;
  }
  sw.stop("probes");
  Json hist = Json::object();
  for (const auto& [k, v] : histogram) hist[std::to_string(k)] = v;
  report["probes_accepted"] = accepted;
  report["multiplicity_histogram"] = std::move(hist);
  report["fraction_multiplicity_4"] =
      accepted ? static_cast<double>(histogram[4]) / static_cast<double>(accepted) : 0.0;
  report["rejected_outside"] = rejected_outside;
  report["near_boundary"] = std::move(near_boundary);
  report["off_four_interior"] = off_four;

  if (!d.probe_point.empty()) {
    const Vec3 p{d.probe_point[0], d.probe_point[1], d.probe_point[2]};
    Json fp;
    fp["point"] = to_json(p);
    try {
      const CoveringEstimate est = estimate_covering_multiplicity(s, hull, p, threads);
      fp["status"] = est.near_boundary ? "near_boundary" : "ok";
      fp["multiplicity"] = est.multiplicity;
      fp["margin"] = est.margin;
    } catch (const OutsideHullError& e) {
      fp["status"] = "rejected_outside";
      fp["signed_distance"] = e.signed_distance();
    }
    report["forced_probe"] = std::move(fp);
  }

  // Pair classifications on a subsampled grid.
  sw.start();
  const std::size_t stride = std::max<std::size_t>(1, s.size() / std::max<std::size_t>(d.grid, 1));
  std::size_t counts[3] = {0, 0, 0};
  for (std::size_t i = 0; i < s.size(); i += stride)
    for (std::size_t j = 0; j < s.size(); j += stride)
      ++counts[static_cast<int>(classify_adjacent_pair(s, i, j).kind)];
  sw.stop("classification");
  Json cls;
  cls["stride"] = stride;
  for (auto k : {PairClassification::Kind::Interior, PairClassification::Kind::Boundary,
                 PairClassification::Kind::Degenerate})
    cls[to_string(k)] = counts[static_cast<int>(k)];
  report["classification"] = std::move(cls);

  sw.start();
  const SupportPolygonReport sp = support_polygons(hull, s);
  sw.stop("support_polygons");
  Json ineq;
  ineq["V"] = vr.vertex_count;
  ineq["K"] = vr.curvature_zero_count;
  ineq["P"] = sp.polygon_count;
  ineq["d"] = 0;
  ineq["P_method"] = "coplanar hull facet groups touching >= 3 separated samples (heuristic)";
  ineq["support_polygons"] = sp.polygons;
  if (vr.is_planar) {
    ineq["satisfied"] = nullptr;
    ineq["slack"] = nullptr;
  } else {
    const InequalityReport r = four_vertex_inequality_report(vr, sp);
    ineq["satisfied"] = r.satisfied;
    ineq["slack"] = r.slack;
  }
  report["four_vertex_inequality"] = std::move(ineq);

  if (o.timing) report["timing_ms"] = sw.json();
  out << report.dump(2) << '\n';
  return kExitOk;
}

// export-mesh -----------------------------------------------------------

int cmd_export_mesh(const CommonOptions& o, const std::string& path,
                    std::ostream& out, std::ostream& err) {
  const CurveInput curve = load_curve(o.spec);
  const SampledCurve s = curve.samples(o.n);
  Json report = header("export-mesh", curve, s.size());
  HullMesh hull;
  try {
    hull = build_hull(s.points());
  } catch (const DegenerateHullError& e) {
    const PlanarityResult plane = planarity_check(s);
    Json m;
    m["max_deviation"] = plane.max_deviation;
    report_gate(report, GateFailure("planarity", e.what(), std::move(m)), err);
    out << report.dump(2) << '\n';
    return kExitGateFailed;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  write_obj(file, hull);
  file.close();
  if (!file) throw IoError("failed writing '" + path + "'");

  const MeshCheck check = check_mesh(hull);
  report["status"] = "ok";
  report["path"] = path;
  report["vertices"] = hull.vertices.size();
  report["facets"] = hull.facets.size();
  report["euler_characteristic"] = check.euler_characteristic;
  report["watertight"] = check.watertight;
  report["outward"] = check.outward;
  report["volume"] = mesh_volume(hull);
  out << report.dump(2) << '\n';
  return kExitOk;
}

// gallery-list ----------------------------------------------------------

int cmd_gallery_list(bool as_json, std::ostream& out) {
  if (as_json) {
    Json arr = Json::array();
    for (const auto& f : gallery::families())
      arr.push_back({{"name", f.name},
                     {"parameters", f.parameters},
                     {"canonical", gallery::get(f.name).name},
                     {"description", f.description}});
    Json report;
    report["schema"] = kSchemaVersion;
    report["command"] = "gallery-list";
    report["curves"] = std::move(arr);
    out << report.dump(2) << '\n';
    return kExitOk;
  }
  for (const auto& f : gallery::families()) {
    out << gallery::get(f.name).name << "\n    " << f.description << '\n';
  }
  return kExitOk;
}

}  // namespace

ProbeRng::ProbeRng(std::uint64_t seed) : engine_(seed) {}

double ProbeRng::next_unit() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::vector<Vec3> read_polyline(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<Vec3> pts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string tok[4];
    int count = 0;
    while (count < 4 && ls >> tok[count]) ++count;
    if (count == 0) continue;
    if (count != 3)
      throw InvalidInput(path + ":" + std::to_string(lineno) +
                         ": expected three coordinates");
    double c[3];
    for (int k = 0; k < 3; ++k) {
      const char* b = tok[k].data();
      const char* e = b + tok[k].size();
      const auto r = std::from_chars(b, e, c[k]);
      if (r.ec != std::errc() || r.ptr != e)
        throw InvalidInput(path + ":" + std::to_string(lineno) + ": bad number '" +
                           tok[k] + "'");
    }
    pts.push_back({c[0], c[1], c[2]});
  }
  if (pts.size() > 1 && pts.front() == pts.back()) pts.pop_back();
  if (pts.size() < 3)
    throw InvalidInput(path + ": a closed polyline needs at least 3 points");
  return pts;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Convex hull volumes of closed space curves"};
  app.name("dform");
  app.require_subcommand(1);

  CommonOptions vol_o;
  bool verify = false;
  auto* vol = app.add_subcommand("volume", "hull volume from the edge-pair double sum");
  add_common_flags(vol, vol_o);
  add_gate_flags(vol, vol_o);
  vol->add_flag("--verify", verify, "cross-check against a dense hull");
  vol->add_flag("--timing", vol_o.timing, "include per-phase wall times");
  vol->add_flag("--json", "JSON report (default)");

  CommonOptions area_o;
  area_o.n = 10000;
  auto* area = app.add_subcommand("area", "enclosed area of a planar curve");
  add_common_flags(area, area_o);
  area->add_flag("--json", "JSON report (default)");

  CommonOptions conv_o;
  std::vector<std::string> conv_ns;
  bool conv_json = false;
  auto* conv = app.add_subcommand("converge", "formula vs. dense hull over several n");
  add_common_flags(conv, conv_o, false);
  add_gate_flags(conv, conv_o);
  conv->add_option("--n", conv_ns, "comma-separated sample counts")->delimiter(',')->required();
  conv->add_flag("--json", conv_json, "JSON instead of CSV");
  conv->add_flag("--csv", "CSV output (default)");

  CommonOptions diag_o;
  DiagnoseOptions diag_d;
  auto* diag = app.add_subcommand("diagnose", "covering multiplicity and classification statistics");
  add_common_flags(diag, diag_o);
  diag->add_option("--probes", diag_d.probes, "random interior probes");
  diag->add_option("--seed", diag_d.seed, "probe generator seed");
  diag->add_option("--probe", diag_d.probe_point, "extra probe point x,y,z")
      ->delimiter(',')
      ->expected(3);
  diag->add_option("--grid", diag_d.grid, "classification grid size per axis")
      ->check(CLI::PositiveNumber);
  diag->add_flag("--timing", diag_o.timing, "include per-phase wall times");
  diag->add_flag("--json", "JSON report (default)");

  CommonOptions exp_o;
  exp_o.n = 500;
  std::string exp_path;
  auto* exp = app.add_subcommand("export-mesh", "write the hull of the samples as OBJ");
  add_common_flags(exp, exp_o);
  exp->add_option("path", exp_path, "output .obj file")->required();

  bool list_json = false;
  auto* list = app.add_subcommand("gallery-list", "list the built-in curves");
  list->add_flag("--json", list_json, "JSON output");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*vol) return cmd_volume(vol_o, verify, out, err);
    if (*area) return cmd_area(area_o, out, err);
    if (*conv) {
      std::vector<std::size_t> ns;
      for (const auto& tok : conv_ns) {
        if (tok.empty()) continue;
        std::size_t v = 0;
        const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (r.ec != std::errc() || r.ptr != tok.data() + tok.size())
          throw InvalidInput("bad sample count '" + tok + "'");
        ns.push_back(v);
      }
      return cmd_converge(conv_o, ns, conv_json, out, err);
    }
    if (*diag) return cmd_diagnose(diag_o, diag_d, out, err);
    if (*exp) return cmd_export_mesh(exp_o, exp_path, out, err);
    if (*list) return cmd_gallery_list(list_json, out);
  } catch (const PlanarityError& e) {
    err << "gate 'planarity' failed: " << e.what() << '\n';
    return kExitGateFailed;
  } catch (const HypothesisError& e) {
    err << "gate 'vertex_count' failed: " << e.what() << '\n';
    return kExitGateFailed;
  } catch (const DegenerateHullError& e) {
    err << "error: " << e.what() << '\n';
    return kExitGateFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace dform::cli
