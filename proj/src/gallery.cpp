#include "dform/gallery.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "dform/errors.hpp"
#include "dform/hull.hpp"

namespace dform::gallery {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Params = std::map<std::string, double>;

struct Family {
  FamilyInfo info;
  Params defaults;
  GalleryEntry (*make)(const Params&);
};

std::string format_params(const std::vector<std::string>& order,
                          const Params& p) {
  std::string out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i) out += ',';
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, p.at(order[i]));
    out += order[i] + '=' + std::string(buf, r.ptr);
  }
  return out;
}

GalleryEntry make_saddle(const Params&) {
  AnalyticCurve curve(
      "saddle", kTwoPi,
      [](double t) { return Vec3{std::cos(t), std::sin(t), std::cos(2 * t)}; },
      [](double t) {
        return Vec3{-std::sin(t), std::cos(t), -2 * std::sin(2 * t)};
      },
      [](double t) {
        return Vec3{-std::cos(t), -std::sin(t), -4 * std::cos(2 * t)};
      },
      [](double t) {
        return Vec3{std::sin(t), -std::cos(t), 8 * std::sin(2 * t)};
      });
  return {"saddle", std::move(curve), 4, true, false, {"convex", "four-vertex"}};
}

GalleryEntry make_baseball(const Params& p) {
  const double a = p.at("a"), b = p.at("b"), c = p.at("c");
  std::string name = "baseball:" + format_params({"a", "b", "c"}, p);
  AnalyticCurve curve(
      name, kTwoPi,
      [=](double t) {
        return Vec3{a * std::cos(t) + b * std::cos(3 * t),
                    a * std::sin(t) - b * std::sin(3 * t), c * std::sin(2 * t)};
      },
      [=](double t) {
        return Vec3{-a * std::sin(t) - 3 * b * std::sin(3 * t),
                    a * std::cos(t) - 3 * b * std::cos(3 * t),
                    2 * c * std::cos(2 * t)};
      },
      [=](double t) {
        return Vec3{-a * std::cos(t) - 9 * b * std::cos(3 * t),
                    -a * std::sin(t) + 9 * b * std::sin(3 * t),
                    -4 * c * std::sin(2 * t)};
      },
      [=](double t) {
        return Vec3{a * std::sin(t) + 27 * b * std::sin(3 * t),
                    -a * std::cos(t) + 27 * b * std::cos(3 * t),
                    -8 * c * std::cos(2 * t)};
      });
  // Expectations hold for the shipped default only.
  const bool is_default = a == 1.0 && b == 0.15 && c == 0.7;
  GalleryEntry e{std::move(name), std::move(curve), std::nullopt, is_default,
                 false, {"seam-curve"}};
  if (is_default) {
    e.expected_vertex_count = 4;
    e.tags.push_back("convex");
    e.tags.push_back("four-vertex");
  }
  return e;
}

GalleryEntry make_ellipse(const Params& p) {
  const double a = p.at("a"), b = p.at("b");
  if (!(a > 0 && b > 0)) throw InvalidInput("ellipse needs a > 0 and b > 0");
  std::string name = "ellipse:" + format_params({"a", "b"}, p);
  AnalyticCurve curve(
      name, kTwoPi,
      [=](double t) { return Vec3{a * std::cos(t), b * std::sin(t), 0.0}; },
      [=](double t) { return Vec3{-a * std::sin(t), b * std::cos(t), 0.0}; },
      [=](double t) { return Vec3{-a * std::cos(t), -b * std::sin(t), 0.0}; },
      [=](double t) { return Vec3{a * std::sin(t), -b * std::cos(t), 0.0}; });
  return {std::move(name), std::move(curve), std::nullopt, true, true,
          {"planar"}};
}

GalleryEntry make_wobble(const Params& p) {
  const double kd = p.at("k");
  const int k = static_cast<int>(kd);
  if (kd != static_cast<double>(k) || k < 3 || k % 2 == 0)
    throw InvalidInput("wobble needs an odd integer k >= 3");
  std::string name = "wobble:k=" + std::to_string(k);
  const double kk = k;
  AnalyticCurve curve(
      name, kTwoPi,
      [=](double t) { return Vec3{std::cos(t), std::sin(t), std::sin(kk * t)}; },
      [=](double t) {
        return Vec3{-std::sin(t), std::cos(t), kk * std::cos(kk * t)};
      },
      [=](double t) {
        return Vec3{-std::cos(t), -std::sin(t), -kk * kk * std::sin(kk * t)};
      },
      [=](double t) {
        return Vec3{std::sin(t), -std::cos(t), -kk * kk * kk * std::cos(kk * t)};
      });
  return {std::move(name), std::move(curve), 2 * k, true, false,
          {"convex", "many-vertex"}};
}

GalleryEntry make_crown(const Params& p) {
  const double h = p.at("h");
  if (!(h > 0)) throw InvalidInput("crown needs h > 0");
  std::string name = "crown:" + format_params({"h"}, p);
  AnalyticCurve curve(
      name, kTwoPi,
      [=](double t) {
        return Vec3{std::cos(t), std::sin(t), h * std::cos(3 * t)};
      },
      [=](double t) {
        return Vec3{-std::sin(t), std::cos(t), -3 * h * std::sin(3 * t)};
      },
      [=](double t) {
        return Vec3{-std::cos(t), -std::sin(t), -9 * h * std::cos(3 * t)};
      },
      [=](double t) {
        return Vec3{std::sin(t), -std::cos(t), 27 * h * std::sin(3 * t)};
      });
  return {std::move(name), std::move(curve), 6, true, false,
          {"convex", "many-vertex", "tri-tangential"}};
}

GalleryEntry make_trefoil(const Params&) {
  // x = rho cos 2t, y = rho sin 2t with rho = 2 + cos 3t.
  auto rho = [](double t, int order) {
    switch (order) {
      case 0:
        return 2 + std::cos(3 * t);
      case 1:
        return -3 * std::sin(3 * t);
      case 2:
        return -9 * std::cos(3 * t);
      default:
        return 27 * std::sin(3 * t);
    }
  };
  AnalyticCurve curve(
      "trefoil", kTwoPi,
      [=](double t) {
        const double r = rho(t, 0);
        return Vec3{r * std::cos(2 * t), r * std::sin(2 * t), std::sin(3 * t)};
      },
      [=](double t) {
        const double r = rho(t, 0), r1 = rho(t, 1);
        const double c = std::cos(2 * t), s = std::sin(2 * t);
        return Vec3{r1 * c - 2 * r * s, r1 * s + 2 * r * c, 3 * std::cos(3 * t)};
      },
      [=](double t) {
        const double r = rho(t, 0), r1 = rho(t, 1), r2 = rho(t, 2);
        const double c = std::cos(2 * t), s = std::sin(2 * t);
        return Vec3{r2 * c - 4 * r1 * s - 4 * r * c,
                    r2 * s + 4 * r1 * c - 4 * r * s, -9 * std::sin(3 * t)};
      },
      [=](double t) {
        const double r = rho(t, 0), r1 = rho(t, 1), r2 = rho(t, 2),
                     r3 = rho(t, 3);
        const double c = std::cos(2 * t), s = std::sin(2 * t);
        return Vec3{r3 * c - 6 * r2 * s - 12 * r1 * c + 8 * r * s,
                    r3 * s + 6 * r2 * c - 12 * r1 * s - 8 * r * c,
                    -27 * std::cos(3 * t)};
      });
  return {"trefoil", std::move(curve), std::nullopt, false, false,
          {"knotted", "non-convex"}};
}

const std::vector<Family>& registry() {
  static const std::vector<Family> kFamilies = {
      {{"saddle", "", "(cos t, sin t, cos 2t); convex, 4 vertices"},
       {},
       &make_saddle},
      {{"baseball", "a=1,b=0.15,c=0.7",
        "(a cos t + b cos 3t, a sin t - b sin 3t, c sin 2t); convex seam curve "
        "with 4 vertices at the defaults"},
       {{"a", 1.0}, {"b", 0.15}, {"c", 0.7}},
       &make_baseball},
      {{"ellipse", "a=2,b=1", "(a cos t, b sin t, 0); planar"},
       {{"a", 2.0}, {"b", 1.0}},
       &make_ellipse},
      {{"wobble", "k=3",
        "(cos t, sin t, sin kt), odd k >= 3; 2k vertices, support polygons in "
        "z = +1 and z = -1"},
       {{"k", 3.0}},
       &make_wobble},
      {{"crown", "h=1",
        "(cos t, sin t, h cos 3t); 6 vertices, tri-tangential planes z = +h and z = -h"},
       {{"h", 1.0}},
       &make_crown},
      {{"trefoil", "",
        "((2 + cos 3t) cos 2t, (2 + cos 3t) sin 2t, sin 3t); knotted, not "
        "convex"},
       {},
       &make_trefoil},
  };
  return kFamilies;
}

}  // namespace

const std::vector<FamilyInfo>& families() {
  static const std::vector<FamilyInfo> kInfo = [] {
    std::vector<FamilyInfo> out;
    for (const auto& f : registry()) out.push_back(f.info);
    return out;
  }();
  return kInfo;
}

GalleryEntry get(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string family = spec.substr(0, colon);
  const Family* found = nullptr;
  for (const auto& f : registry())
    if (f.info.name == family) found = &f;
  if (!found) {
    std::string names;
    for (const auto& f : registry()) names += (names.empty() ? "" : ", ") + f.info.name;
    throw InvalidInput("unknown curve '" + family + "'; available: " + names);
  }

  Params params = found->defaults;
  if (colon != std::string::npos) {
    std::istringstream list(spec.substr(colon + 1));
    std::string item;
    while (std::getline(list, item, ',')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      const std::string key = item.substr(0, eq);
      if (eq == std::string::npos || !params.count(key))
        throw InvalidInput("curve '" + family + "' has no parameter '" + key +
                           "' (parameters: " +
                           (found->info.parameters.empty()
                                ? std::string("none")
                                : found->info.parameters) +
                           ")");
      try {
        std::size_t used = 0;
        const std::string text = item.substr(eq + 1);
        params[key] = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
      } catch (const std::logic_error&) {
        throw InvalidInput("parameter '" + key + "' of '" + family +
                           "' is not a number: " + item.substr(eq + 1));
      }
    }
  }
  return found->make(params);
}

bool verify_all_extreme(const GalleryEntry& entry, std::size_t n) {
  const SampledCurve samples = sample_uniform(entry.curve, n);
  const HullMesh hull = build_hull(samples.points());
  return is_convex_curve(samples, hull).convex;
}

}  // namespace dform::gallery
