#include "dform/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dform/gallery.hpp"
#include "dform/hull.hpp"
#include "test_support.hpp"

namespace dform {
namespace {

using testing::random_rigid_motion;
using testing::random_vec;
using testing::relative_error;

constexpr double kPi = std::numbers::pi;

TEST(TripleProductTest, Examples) {
  EXPECT_EQ(triple_product({1, 0, 0}, {0, 1, 0}, {0, 0, 1}), 1.0);
  EXPECT_EQ(triple_product({1, 0, 0}, {1, 0, 0}, {0, 0, 1}), 0.0);
  EXPECT_EQ(triple_product({0, 1, 0}, {1, 0, 0}, {0, 0, 1}), -1.0);
}

TEST(SignedTetraVolumeTest, Examples) {
  EXPECT_NEAR(signed_tetra_volume({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}),
              1.0 / 6.0, 1e-15);
  EXPECT_EQ(signed_tetra_volume({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}), 0.0);
  EXPECT_NEAR(signed_tetra_volume({0, 0, 0}, {2, 0, 0}, {0, 3, 0}, {0, 0, 4}),
              4.0, 1e-14);
}

TEST(SignedTetraVolumeTest, BothBracketFormsAgree) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10000; ++trial) {
    const Vec3 a = random_vec(rng), b = random_vec(rng), c = random_vec(rng),
               d = random_vec(rng);
    const double v1 = signed_tetra_volume(a, b, c, d);
    const double v2 = signed_tetra_volume_edge_form(a, b, c, d);
    EXPECT_LE(std::abs(v1 - v2), 1e-12 * std::abs(v1)) << "trial " << trial;
  }
}

TEST(SignedTetraVolumeTest, SwappingEdgesPreservesMagnitude) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10000; ++trial) {
    const Vec3 a = random_vec(rng), b = random_vec(rng), c = random_vec(rng),
               d = random_vec(rng);
    const double vij = std::abs(signed_tetra_volume(a, b, c, d));
    const double vji = std::abs(signed_tetra_volume(c, d, a, b));
    EXPECT_LE(std::abs(vij - vji), 1e-12 * vij);
  }
}

TEST(PairwiseSumTest, MatchesNaiveSumOnIntegers) {
  std::vector<double> v(1001);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  EXPECT_EQ(pairwise_sum(v), 1000.0 * 1001.0 / 2.0);
  EXPECT_EQ(pairwise_sum(std::span<const double>{}), 0.0);
}

TEST(PlanarAreaTest, UnitSquare) {
  auto sq = SampledCurve::from_points({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}});
  EXPECT_NEAR(planar_area_integral(sq), 1.0, 1e-12);
}

TEST(PlanarAreaTest, UnitCircle) {
  auto circle = gallery::get("ellipse:a=1,b=1");
  auto s = sample_uniform(circle.curve, 10000);
  EXPECT_NEAR(planar_area_integral(s), kPi, 1e-6);
}

TEST(PlanarAreaTest, RotatedTriangle) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto tri = SampledCurve::from_points({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}})
                   .transformed(random_rigid_motion(rng));
    EXPECT_NEAR(planar_area_integral(tri), 0.5, 1e-12);
  }
}

TEST(PlanarAreaTest, PlaneAwayFromOrigin) {
  auto sq = SampledCurve::from_points(
      {{5, 5, 3}, {6, 5, 3}, {6, 6, 3}, {5, 6, 3}});
  EXPECT_NEAR(planar_area_integral(sq), 1.0, 1e-12);
}

TEST(PlanarAreaTest, RejectsNonPlanar) {
  auto s = sample_uniform(gallery::get("saddle").curve, 200);
  EXPECT_THROW(planar_area_integral(s), PlanarityError);
}

class HullVolumeTest : public ::testing::Test {
 protected:
  static const SampledCurve& saddle() {
    static const SampledCurve s = sample_uniform(gallery::get("saddle").curve, 400);
    return s;
  }
};

TEST_F(HullVolumeTest, ScalingByTwoIsExactlyEightfold) {
  Similarity xf;
  xf.scale = 2.0;
  const double v1 = hull_volume(saddle()).volume;
  const double v2 = hull_volume(saddle().transformed(xf)).volume;
  EXPECT_EQ(v2, 8.0 * v1);
}

TEST_F(HullVolumeTest, CubicScalingLaw) {
  for (double c : {0.3, 1.7, 12.5}) {
    Similarity xf;
    xf.scale = c;
    const double v1 = hull_volume(saddle()).volume;
    const double vc = hull_volume(saddle().transformed(xf)).volume;
    EXPECT_LE(relative_error(vc, c * c * c * v1), 1e-12) << "c = " << c;
  }
}

TEST_F(HullVolumeTest, RigidMotionInvariance) {
  std::mt19937_64 rng(5);
  const double v = hull_volume(saddle()).volume;
  for (int trial = 0; trial < 5; ++trial) {
    const double moved =
        hull_volume(saddle().transformed(random_rigid_motion(rng))).volume;
    EXPECT_LE(relative_error(moved, v), 1e-9);
  }
}

TEST_F(HullVolumeTest, ThreadCountDoesNotChangeBits) {
  VolumeOptions one, four;
  four.threads = 4;
  const auto a = hull_volume(saddle(), one);
  const auto b = hull_volume(saddle(), four);
  EXPECT_EQ(a.volume, b.volume);
  EXPECT_EQ(a.error_estimate, b.error_estimate);
  EXPECT_EQ(hull_volume(saddle(), one).volume, a.volume);
}

TEST_F(HullVolumeTest, ReportsMetadata) {
  const auto r = hull_volume(saddle());
  EXPECT_EQ(r.n, 400u);
  EXPECT_EQ(r.multiplicity_m, 4);
  EXPECT_EQ(r.method, VolumeMethod::DoubleSum);
  EXPECT_GT(r.error_estimate, 0.0);
  EXPECT_FALSE(r.unverified_hypothesis);
}

TEST_F(HullVolumeTest, MultiplicityValidation) {
  VolumeOptions zero;
  zero.multiplicity = 0;
  zero.allow_nondefault_multiplicity = true;
  EXPECT_THROW(hull_volume(saddle(), zero), InvalidInput);

  VolumeOptions two;
  two.multiplicity = 2;
  EXPECT_THROW(hull_volume(saddle(), two), InvalidInput);
  two.allow_nondefault_multiplicity = true;
  EXPECT_NEAR(hull_volume(saddle(), two).volume,
              2.0 * hull_volume(saddle()).volume, 1e-12);
}

TEST(HullVolumeGateTest, RejectsPlanarCurve) {
  auto s = sample_uniform(gallery::get("ellipse").curve, 200);
  EXPECT_THROW(hull_volume(s), PlanarityError);
}

TEST(HullVolumeGateTest, RejectsSixVertexCurveUnlessOverridden) {
  auto s = sample_uniform(gallery::get("wobble:k=3").curve, 500);
  try {
    hull_volume(s);
    FAIL() << "expected HypothesisError";
  } catch (const HypothesisError& e) {
    EXPECT_EQ(e.report().vertex_count, 6);
  }
  VolumeOptions force;
  force.override_vertex_gate = true;
  const auto r = hull_volume(s, force);
  EXPECT_TRUE(r.unverified_hypothesis);
  EXPECT_GT(r.volume, 0.0);
}

TEST(HullVolumeGateTest, UsesSuppliedVertexReport) {
  auto s = sample_uniform(gallery::get("saddle").curve, 100);
  VolumeOptions opts;
  VertexReport fake;
  fake.vertex_count = 2;
  opts.vertex_report = fake;
  EXPECT_THROW(hull_volume(s, opts), HypothesisError);
}

TEST(DoubleSumTest, PlanarCurveGivesNegligibleVolume) {
  auto s = sample_uniform(gallery::get("ellipse").curve, 300);
  const double length = s.total_length();
  EXPECT_LT(abs_tetra_double_sum(s.points()) / 4.0,
            1e-12 * length * length * length);
}

TEST(DoubleSumTest, MatchesDirectDefinition) {
  auto s = sample_uniform(gallery::get("baseball").curve, 60);
  const auto p = s.points();
  const std::size_t n = p.size();
  double direct = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      direct += std::abs(signed_tetra_volume(p[i], p[(i + 1) % n], p[j],
                                             p[(j + 1) % n]));
  EXPECT_NEAR(abs_tetra_double_sum(p), direct, 1e-12 * direct);
}

TEST(ClassifyPairTest, RepeatedEdgeIsDegenerate) {
  auto s = sample_uniform(gallery::get("saddle").curve, 200);
  for (std::size_t i : {0u, 17u, 199u}) {
    EXPECT_EQ(classify_adjacent_pair(s, i, i).kind,
              PairClassification::Kind::Degenerate);
  }
}

TEST(ClassifyPairTest, SharedTriangleAndSigns) {
  auto s = sample_uniform(gallery::get("saddle").curve, 200);
  const auto c = classify_adjacent_pair(s, 10, 90);
  EXPECT_EQ(c.shared_face_triangle[0], s.point(11));
  EXPECT_EQ(c.shared_face_triangle[1], s.point(90));
  EXPECT_EQ(c.shared_face_triangle[2], s.point(91));
  EXPECT_NE(c.kind, PairClassification::Kind::Degenerate);
  const bool same = (c.volume_ij > 0) == (c.volume_next > 0);
  EXPECT_EQ(c.kind, same ? PairClassification::Kind::Interior
                         : PairClassification::Kind::Boundary);
}

TEST(ClassifyPairTest, IndexOutOfRange) {
  auto s = sample_uniform(gallery::get("saddle").curve, 50);
  EXPECT_THROW(classify_adjacent_pair(s, 50, 0), InvalidInput);
}

TEST(ClassifyPairTest, WrapsAtTheEnd) {
  auto s = sample_uniform(gallery::get("saddle").curve, 50);
  const auto c = classify_adjacent_pair(s, 49, 20);
  EXPECT_EQ(c.shared_face_triangle[0], s.point(0));
}

// A generic starting parameter avoids the flat quads of mirror-symmetric
// sampling, so real boundary pairs occur.
TEST(ClassifyPairTest, BoundaryPairsLieOnTheHull) {
  const AnalyticCurve saddle = gallery::get("saddle").curve;
  const AnalyticCurve shifted("saddle-shifted", saddle.period(),
                              [&](double t) { return saddle.position(t + 0.31); });
  const auto s = sample_uniform(shifted, 80);
  const HullMesh hull = build_hull(s.points());
  int boundary = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      const auto c = classify_adjacent_pair(s, i, j);
      if (c.kind == PairClassification::Kind::Degenerate) continue;
      const auto& t = c.shared_face_triangle;
      const double depth = max_plane_distance(hull, (t[0] + t[1] + t[2]) / 3.0);
      if (c.kind == PairClassification::Kind::Boundary) {
        ++boundary;
        EXPECT_GE(depth, -hull.epsilon) << i << "," << j;
      } else {
        EXPECT_LT(depth, -hull.epsilon) << i << "," << j;
      }
    }
  }
  EXPECT_GT(boundary, 0);
}

class CoveringTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    curve_ = new SampledCurve(sample_uniform(gallery::get("saddle").curve, 2000));
    hull_ = new HullMesh(build_hull(curve_->points()));
  }
  static void TearDownTestSuite() {
    delete curve_;
    delete hull_;
  }
  static SampledCurve* curve_;
  static HullMesh* hull_;
};

SampledCurve* CoveringTest::curve_ = nullptr;
HullMesh* CoveringTest::hull_ = nullptr;

TEST_F(CoveringTest, OriginIsCoveredFourTimes) {
  const auto est = estimate_covering_multiplicity(*curve_, *hull_, {0, 0, 0});
  EXPECT_EQ(est.multiplicity, 4);
  EXPECT_GT(est.hits, 4u);
  EXPECT_FALSE(est.near_boundary);
  EXPECT_NEAR(est.chord_tolerance, 2.0 * curve_->total_length() / 2000.0, 1e-15);
}

TEST_F(CoveringTest, FarPointIsRejected) {
  EXPECT_THROW(estimate_covering_multiplicity(*curve_, *hull_, {10, 10, 10}),
               OutsideHullError);
}

TEST_F(CoveringTest, BoundaryPointIsRejected) {
  EXPECT_THROW(estimate_covering_multiplicity(*curve_, *hull_, curve_->point(0)),
               OutsideHullError);
}

TEST_F(CoveringTest, ThreadCountDoesNotMatter) {
  const Vec3 p{0.1, -0.2, 0.05};
  const auto a = estimate_covering_multiplicity(*curve_, *hull_, p, 1);
  const auto b = estimate_covering_multiplicity(*curve_, *hull_, p, 3);
  EXPECT_EQ(a.multiplicity, b.multiplicity);
  EXPECT_EQ(a.hits, b.hits);
}

}  // namespace
}  // namespace dform
