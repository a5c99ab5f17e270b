#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "euler_plane/curve.hpp"
#include "euler_plane/error.hpp"

using namespace euler_plane;

namespace {

constexpr double kPi = std::numbers::pi;

SampledCurve figure_eight() {
  return SampledCurve::sample(
      [](double t) {
        const double a = kTwoPi * t;
        return PointVel{Point(std::sin(a), 0.5 * std::sin(2 * a)), Vector(kTwoPi * std::cos(a), kTwoPi * std::cos(2 * a))};
      },
      true);
}

SampledCurve square(bool ccw) {
  const std::vector<Point> v = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  std::vector<SampledCurve> edges;
  for (int i = 0; i < 4; ++i) {
    const int j = ccw ? i : 3 - i;
    const int k = ccw ? (i + 1) % 4 : (3 - i + 3) % 4;
    edges.push_back(segment(v[static_cast<std::size_t>(j)], v[static_cast<std::size_t>(k)]));
  }
  return smooth_corners(edges, 0.1);
}

// Brute-force oracle: every polyline segment pair, sign from the segment directions.
int naive_crossings(const SampledCurve& a, const SampledCurve& b) {
  const auto& sa = a.samples();
  const auto& sb = b.samples();
  int count = 0;
  for (std::size_t i = 0; i + 1 < sa.size(); ++i)
    for (std::size_t j = 0; j + 1 < sb.size(); ++j) {
      const Point p = sa[i].point, r = sa[i + 1].point - sa[i].point;
      const Point q = sb[j].point, s = sb[j + 1].point - sb[j].point;
      const double denom = cross<double>(r, s);
      if (denom == 0.0) continue;
      const double lam = cross<double>(Vector(q - p), s) / denom;
      const double mu = cross<double>(Vector(q - p), r) / denom;
      if (lam > 0 && lam < 1 && mu > 0 && mu < 1) count += denom > 0 ? 1 : -1;
    }
  return count;
}

SampledCurve random_arc(std::mt19937_64& rng, const Point& a, const Point& b, const Vector& t0, const Vector& t1) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Point via = 0.5 * (a + b) + Vector(u(rng), u(rng));
  const Vector vv = Vector(u(rng), u(rng)) + 0.8 * (b - a);
  const double s0 = 1.0 + 0.5 * u(rng);
  const double s1 = 1.0 + 0.5 * u(rng);
  return concatenate({hermite(a, s0 * t0, via, vv), hermite(via, vv, b, s1 * t1)}, false);
}

SampledCurve random_hermite(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  return hermite(Point(u(rng), u(rng)), Vector(u(rng), u(rng)) * 3, Point(u(rng), u(rng)), Vector(u(rng), u(rng)) * 3);
}

Vector unit_at(double angle) { return {std::cos(angle), std::sin(angle)}; }

// Endpoint data for arcs in a common space: transport is the rotation taking t0 to t1.
struct SpaceFixture {
  Point a{0, 0};
  Point b{2, 0.5};
  double turn = 0.7;
  ArcSpace space() const { return {a, b, rotation_matrix(turn)}; }
  SampledCurve arc(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> ang(-1.2, 1.2);
    const double th = ang(rng);
    return random_arc(rng, a, b, unit_at(th), unit_at(th + turn));
  }
};

}  // namespace

TEST(Curve, CircleTurning) {
  EXPECT_EQ(turning_number(circle(Point(0, 0), 1.0)), 1);
  EXPECT_EQ(turning_number(circle(Point(3, -1), 0.2, false)), -1);
  EXPECT_EQ(winding_number(circle(Point(0, 0), 1.0), Point(0.1, 0.2)), 1);
  EXPECT_EQ(winding_number(circle(Point(0, 0), 1.0), Point(3, 0)), 0);
}

TEST(Curve, FigureEightHasTurningZero) { EXPECT_EQ(turning_number(figure_eight()), 0); }

TEST(Curve, SamplingContract) {
  const SampledCurve c = figure_eight();
  EXPECT_LT(c.max_turn(), 0.1);
  for (std::size_t i = 0; i + 1 < c.size(); ++i) EXPECT_LE((c.samples()[i + 1].point - c.samples()[i].point).norm(), 0.05 + 1e-12);
}

TEST(Curve, PushForwardIdentityAndRigid) {
  const SampledCurve c = circle(Point(0, 0), 1.0);
  const SampledCurve same = push_forward(MapExpr(), c);
  EXPECT_EQ(same.size(), c.size());
  const SampledCurve rotated = push_forward(MapExpr(make_rotation(0.4)), c);
  for (const auto& s : rotated.samples()) EXPECT_NEAR(s.point.norm(), 1.0, 1e-12);
  EXPECT_EQ(turning_number(rotated), 1);
}

TEST(Curve, PushForwardDilation) {
  const SampledCurve c = push_forward(MapExpr(make_dilation(2.0)), circle(Point(0, 0), 1.0));
  for (const auto& s : c.samples()) EXPECT_NEAR(s.point.norm(), 2.0, 1e-12);
  EXPECT_EQ(turning_number(c), 1);
}

TEST(Curve, SingleCrossingSign) {
  const auto r = signed_intersections(segment(Point(-1, 0), Point(1, 0)), segment(Point(0, -1), Point(0, 1)));
  EXPECT_EQ(r.count, 1);
  ASSERT_EQ(r.events.size(), 1u);
  EXPECT_NEAR(r.events[0].location.norm(), 0.0, 1e-12);
  EXPECT_NEAR(r.events[0].t, 0.5, 1e-12);
  EXPECT_EQ(signed_intersections(segment(Point(0, -1), Point(0, 1)), segment(Point(-1, 0), Point(1, 0))).count, -1);
}

TEST(Curve, DisjointCurves) {
  const auto r = signed_intersections(circle(Point(0, 0), 1.0), circle(Point(5, 0), 1.0));
  EXPECT_EQ(r.count, 0);
  EXPECT_TRUE(r.events.empty());
}

TEST(Curve, SharedEndpointsExcluded) {
  const auto r = signed_intersections(segment(Point(0, 0), Point(1, 0)), segment(Point(0, 0), Point(0, 1)));
  EXPECT_TRUE(r.events.empty());
}

TEST(Curve, TangentialContactRejected) {
  // a cubic inflecting through the x-axis with zero slope
  const SampledCurve a = hermite(Point(-1, 0), Vector(2, 0), Point(1, 0), Vector(2, 0));
  const SampledCurve b = SampledCurve::sample(
      [](double t) {
        const double x = 2 * t - 1;
        return PointVel{Point(x, x * x * x), Vector(2, 6 * x * x)};
      },
      false);
  EXPECT_THROW(signed_intersections(a, b), Error);
}

TEST(Curve, SquareSmoothing) {
  EXPECT_EQ(turning_number(square(true)), 1);
  EXPECT_EQ(turning_number(square(false)), -1);
}

TEST(Curve, SmoothingAgreesOutsideCornerBalls) {
  const SampledCurve s = square(true);
  EXPECT_LT(s.max_turn(), 0.1);
  const std::vector<Point> corners = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  for (const auto& x : s.samples()) {
    double to_corner = 1e9;
    for (const auto& c : corners) to_corner = std::min(to_corner, (x.point - c).norm());
    if (to_corner < 0.1 + 1e-9) continue;
    const double to_edge = std::min({std::abs(x.point.x()), std::abs(x.point.x() - 1), std::abs(x.point.y()),
                                     std::abs(x.point.y() - 1)});
    EXPECT_LT(to_edge, 1e-12);
  }
}

TEST(Curve, CuspCornerRejected) {
  try {
    smooth_corners({segment(Point(0, 0), Point(1, 0)), segment(Point(1, 0), Point(0, 0))}, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CuspCorner);
  }
}

TEST(Curve, AddTwistZeroIsIdentity) {
  std::mt19937_64 rng(5);
  const SpaceFixture f;
  const SampledCurve x = f.arc(rng);
  EXPECT_EQ(add_twist(x, 0).size(), x.size());
}

TEST(Curve, AddTwistShiftsClass) {
  std::mt19937_64 rng(6);
  const SpaceFixture f;
  const SampledCurve x = f.arc(rng);
  ASSERT_TRUE(is_embedded(x));
  for (int k = -3; k <= 3; ++k) {
    const SampledCurve t = add_twist(x, k);
    EXPECT_TRUE(is_embedded(t)) << k;
    EXPECT_EQ(writhe_difference(t, x, f.space()), k) << k;
    // oracle: tangent rotation along the arcs alone, no closing path; a positive
    // twist at the end point turns the tangent clockwise.
    EXPECT_EQ(std::lround((total_rotation(x) - total_rotation(t)) / kTwoPi), k) << k;
  }
}

TEST(Curve, AddTwistInverse) {
  std::mt19937_64 rng(7);
  const SpaceFixture f;
  const SampledCurve x = f.arc(rng);
  EXPECT_EQ(writhe_difference(add_twist(add_twist(x, 1), -1), x, f.space()), 0);
  EXPECT_EQ(writhe_difference(x, x, f.space()), 0);
}

TEST(Curve, MembershipChecked) {
  std::mt19937_64 rng(8);
  const SpaceFixture f;
  const SampledCurve x = f.arc(rng);
  ArcSpace wrong = f.space();
  wrong.transport = rotation_matrix(f.turn + 0.1);
  EXPECT_THROW(writhe_difference(x, x, wrong), Error);
}

TEST(Curve, SpliceOfTemplateIsTemplate) {
  std::mt19937_64 rng(9);
  const SpaceFixture f;
  const SampledCurve x = f.arc(rng);
  const SampledCurve s = splice_near_endpoints(x, x, 0.3);
  EXPECT_EQ(writhe_difference(x, s, f.space()), 0);
  // every spliced point lies on x (within half a sampling chord)
  for (const auto& p : s.samples()) {
    double nearest = 1e9;
    for (const auto& q : x.samples()) nearest = std::min(nearest, (p.point - q.point).norm());
    EXPECT_LT(nearest, 0.03);
  }
}

TEST(Curve, SpliceAgreesWithTemplateNearEndpoints) {
  std::mt19937_64 rng(10);
  const SpaceFixture f;
  const SampledCurve templ = f.arc(rng);
  const SampledCurve a = add_twist(templ, 1);
  const SampledCurve s = splice_near_endpoints(a, templ, 0.4);
  EXPECT_LT(std::abs(signed_angle<double>(s.end_tangent(), templ.end_tangent())), 1e-9);
  EXPECT_LT(std::abs(signed_angle<double>(s.start_tangent(), templ.start_tangent())), 1e-9);
  EXPECT_EQ(writhe_difference(a, s, f.space()), 0);
}

// --- properties -------------------------------------------------------------

TEST(CurveProperty, CrossingsMatchBruteForceAndAntisymmetric) {
  std::mt19937_64 rng(21);
  int checked = 0;
  while (checked < 100) {
    const SampledCurve a = random_hermite(rng);
    const SampledCurve b = random_hermite(rng);
    try {
      const int ab = signed_intersections(a, b).count;
      const int ba = signed_intersections(b, a).count;
      EXPECT_EQ(ab, -ba);
      EXPECT_EQ(ab, naive_crossings(a, b));
      ++checked;
    } catch (const Error& e) {
      ASSERT_EQ(e.code(), ErrorCode::NonTransverseContact);
    }
  }
}

TEST(CurveProperty, CrossingsInvariantUnderDiffeomorphism) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 25; ++i) {
    const SampledCurve a = random_hermite(rng);
    const SampledCurve b = random_hermite(rng);
    std::vector<MapExpr> word;
    for (int k = 0; k < 4; ++k) {
      switch (k % 4) {
        case 0: word.emplace_back(make_annulus_twist(Point(u(rng), u(rng)), 0.5, 1.5, 1)); break;
        case 1: word.emplace_back(make_strip_shear(-1.0, 1.0, u(rng))); break;
        case 2: word.emplace_back(make_dilation(1.3, Point(u(rng), u(rng)))); break;
        default: word.emplace_back(make_local_rotation(Point(u(rng), u(rng)), 0.4, 1.2, 2 * u(rng))); break;
      }
    }
    const MapExpr g = compose(word);
    try {
      EXPECT_EQ(signed_intersections(a, b).count,
                signed_intersections(push_forward(g, a), push_forward(g, b)).count);
    } catch (const Error& e) {
      ASSERT_EQ(e.code(), ErrorCode::NonTransverseContact);
    }
  }
}

TEST(CurveProperty, TurningInvariantUnderRigidMotionAndResampling) {
  const SampledCurve c = figure_eight();
  const SampledCurve s = square(false);
  const MapExpr motion = compose({make_translation(Vector(3, -2)), make_rotation(1.1)});
  EXPECT_EQ(turning_number(push_forward(motion, c)), turning_number(c));
  EXPECT_EQ(turning_number(push_forward(motion, s)), turning_number(s));
  SamplingOptions dense;
  dense.max_chord = 0.025;
  dense.max_turn = 0.04;
  dense.initial_grid = 512;
  EXPECT_EQ(turning_number(SampledCurve::sample(c.parametrization(), true, dense)), turning_number(c));
  EXPECT_EQ(turning_number(SampledCurve::sample(s.parametrization(), true, dense)), turning_number(s));
}

TEST(CurveProperty, WritheIndependentOfReturnPath) {
  std::mt19937_64 rng(23);
  const SpaceFixture f;
  for (int i = 0; i < 50; ++i) {
    const SampledCurve x = f.arc(rng);
    const SampledCurve y = f.arc(rng);
    EXPECT_EQ(writhe_difference(x, y, f.space(), 0), writhe_difference(x, y, f.space(), 1));
    EXPECT_EQ(writhe_difference(x, y, f.space(), 0), writhe_difference(x, y, f.space(), -1));
  }
}

TEST(CurveProperty, WritheIsAffine) {
  std::mt19937_64 rng(24);
  std::uniform_int_distribution<int> k(-2, 2);
  const SpaceFixture f;
  for (int i = 0; i < 20; ++i) {
    const SampledCurve x = add_twist(f.arc(rng), k(rng));
    const SampledCurve y = add_twist(f.arc(rng), k(rng));
    const SampledCurve z = add_twist(f.arc(rng), k(rng));
    EXPECT_EQ(writhe_difference(x, z, f.space()), writhe_difference(x, y, f.space()) + writhe_difference(y, z, f.space()));
    EXPECT_EQ(writhe_difference(x, y, f.space()), -writhe_difference(y, x, f.space()));
  }
}

TEST(CurveProperty, GenericSpliceKeepsClass) {
  std::mt19937_64 rng(25);
  const SpaceFixture f;
  for (int i = 0; i < 10; ++i) {
    const SampledCurve a = f.arc(rng);
    const SampledCurve templ = f.arc(rng);
    const SampledCurve s = splice_near_endpoints(a, templ, 0.3);
    EXPECT_EQ(writhe_difference(a, s, f.space()), 0);
  }
}
