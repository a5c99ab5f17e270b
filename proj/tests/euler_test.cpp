#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "euler_plane/error.hpp"
#include "euler_plane/euler.hpp"
#include "euler_plane/zoo.hpp"

using namespace euler_plane;

namespace {

constexpr double kPi = std::numbers::pi;

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InvalidArgument;
}

// Arc (0,0) -> (1,0) folding out to x = 1/2 + reach and back, crossing the axis once.
SampledCurve fold(double reach, double height) {
  return SampledCurve::sample(
      [=](double t) {
        const double s = std::sin(kPi * t);
        return PointVel{Point(t + reach * s * s, height * std::sin(kTwoPi * t)),
                        Vector(1 + reach * kPi * std::sin(kTwoPi * t), height * kTwoPi * std::cos(kTwoPi * t))};
      },
      false);
}

PlanarAction with_identity_alpha(const MapExpr& beta) { return PlanarAction::surface(1, {MapExpr(), beta}); }

// Sum of crossing signs of one term of a_i, per index.
std::map<int, int> term_counts(const CoefficientTable& t, bool from_image) {
  std::map<int, int> out;
  for (const IndexedCrossing& c : t.crossings)
    if (c.from_image == from_image) out[c.index] += c.event.sign;
  return out;
}

}  // namespace

// --- lift -------------------------------------------------------------------

TEST(Lift, BestvinaFamily) {
  for (int n = -3; n <= 3; ++n) {
    const zoo::Recipe r = zoo::bestvina(n);
    EXPECT_EQ(euler_via_lift(r.action, *r.lift).value, n) << n;
  }
}

TEST(Lift, GenusTwoSmooth) {
  for (int n : {0, 1, 3}) {
    const zoo::Recipe r = zoo::genus2_smooth(n);
    EXPECT_EQ(euler_via_lift(r.action, *r.lift).value, n) << n;
  }
}

TEST(Lift, ReportsResidue) {
  const zoo::Recipe r = zoo::bestvina(1);
  const EulerReport rep = euler_via_lift(r.action, *r.lift);
  EXPECT_LT(std::abs(rep.diagnostics.at("residue")), 1e-6);
  EXPECT_NEAR(rep.diagnostics.at("angle_change"), kTwoPi, 1e-6);
}

// --- graphical ----------------------------------------------------------------

TEST(Graphical, TranslationsGiveZero) {
  const zoo::Recipe r = zoo::free_translations();
  EXPECT_EQ(euler_via_graphical(r.action, r.graphical_basepoint).value, 0);
}

TEST(Graphical, GenusTwoMatchesLift) {
  for (int n = -2; n <= 3; ++n) {
    const zoo::Recipe r = zoo::genus2_smooth(n);
    EXPECT_EQ(euler_via_graphical(r.action, r.graphical_basepoint).value, n) << n;
  }
}

TEST(Graphical, BestvinaAndPullback) {
  for (int n : {-1, 1, 2}) {
    const zoo::Recipe r = zoo::bestvina(n);
    EXPECT_EQ(euler_via_graphical(r.action, r.graphical_basepoint).value, n);
  }
  const zoo::Recipe g3 = zoo::pullback_degree_one(zoo::bestvina(2), 3);
  EXPECT_EQ(euler_via_graphical(g3.action, g3.graphical_basepoint).value, 2);
}

TEST(Graphical, DevelopedBoundaryCloses) {
  const zoo::Recipe r = zoo::genus2_smooth(1);
  const DevelopedBoundary d = develop_boundary(r.action, default_base_arcs(r.action, r.graphical_basepoint),
                                               r.graphical_basepoint);
  ASSERT_EQ(d.edges.size(), 8u);
  EXPECT_EQ(d.vertex_degree, 1);
  EXPECT_LT((d.vertices.back() - d.vertices.front()).norm(), 1e-7);
  for (std::size_t k = 0; k < 8; ++k) EXPECT_LT((d.edges[k].end() - d.vertices[k + 1]).norm(), 1e-12);
  // e = turning(delta) + 1 - 2g
  EXPECT_EQ(d.turning, 1 + 2 * 2 - 1);
}

TEST(Graphical, ThreeTurnVertexRejected) {
  const PlanarAction act = zoo::free_translations().action;
  const Point z0 = Point::Zero();
  // b's arc leaves southwards and arrives heading south: every corner is 3/4 of a turn
  const std::vector<SampledCurve> arcs{segment(z0, Point(1, 0)), hermite(z0, Vector(0.3, -1), Point(0, 1), Vector(-0.3, -1))};
  EXPECT_EQ(code_of([&] { develop_boundary(act, arcs, z0); }), ErrorCode::VertexNotImmersed);
}

TEST(Graphical, StraightArcsForTranslations) {
  const PlanarAction act = zoo::free_translations().action;
  const Point z0 = Point::Zero();
  const std::vector<SampledCurve> arcs{segment(z0, Point(1, 0)), segment(z0, Point(0, 1))};
  EXPECT_EQ(euler_via_graphical(act, arcs, z0).value, 0);
}

TEST(Graphical, ArcsMustMatchGenerators) {
  const PlanarAction act = zoo::free_translations().action;
  const std::vector<SampledCurve> arcs{segment(Point::Zero(), Point(2, 0)), segment(Point::Zero(), Point(0, 1))};
  EXPECT_EQ(code_of([&] { develop_boundary(act, arcs, Point::Zero()); }), ErrorCode::InvalidArgument);
}

// --- coefficients and signed sums -------------------------------------------

TEST(SignedSum, IdentityAlphaHasZeroTable) {
  const PlanarAction act = with_identity_alpha(make_translation(Vector(1, 0)));
  const CoefficientTable t = coefficients_a(act, fold(1.3, 0.4), 10);
  for (int i = -10; i <= 10; ++i) EXPECT_EQ(t.at(i), 0) << i;
  EXPECT_EQ(euler_via_signed_sum(act, fold(1.3, 0.4), 10).value, 0);
}

TEST(SignedSum, TorusShearVanishesWithFiniteTail) {
  const zoo::Recipe r = zoo::torus_shear();
  const EulerReport rep = euler_via_signed_sum(r.action, *r.tau, 50);
  EXPECT_EQ(rep.value, 0);
  EXPECT_TRUE(rep.certified);
  ASSERT_TRUE(rep.table);
  EXPECT_LT(rep.table->tail_bound, 50);
  for (int i = rep.table->tail_bound + 1; i <= 50; ++i) EXPECT_TRUE(rep.table->at(i) == 0 && rep.table->at(-i) == 0);
  EXPECT_TRUE(rep.table->spliced[49] && rep.table->spliced[51]);
}

TEST(SignedSum, TailBoundMatchesGeometry) {
  // the fold reaches x = 2.8; translates from either side come within that
  // distance of p for |i| <= 5
  const PlanarAction act = zoo::torus_shear().action;
  const CoefficientTable t = coefficients_a(act, fold(2.3, 0.4), 12);
  EXPECT_EQ(t.tail_bound, 6);
}

TEST(SignedSum, SmallWindowDemandsLargerN) {
  const PlanarAction act = zoo::torus_shear().action;
  EXPECT_EQ(code_of([&] { euler_via_signed_sum(act, fold(2.3, 0.4), 2); }), ErrorCode::TailNotVanished);
}

TEST(SignedSum, ReturningOrbitRejected) {
  const zoo::Recipe r = zoo::bestvina(1);
  EXPECT_EQ(code_of([&] { euler_via_signed_sum(r.action, *r.tau, 6); }), ErrorCode::OrbitMaybeNonProper);
  SignedSumOptions o;
  o.allow_non_proper = true;
  EXPECT_FALSE(euler_via_signed_sum(r.action, *r.tau, 6, o).certified);
}

TEST(SignedSum, ArcMustStartAtFixedPoint) {
  const PlanarAction act = zoo::torus_shear().action;
  const SampledCurve off = segment(Point(0, 0.5), Point(1, 0.5));
  EXPECT_EQ(code_of([&] { coefficients_a(act, off, 5); }), ErrorCode::NotApplicable);
}

TEST(SignedSum, RandomTorusTablesAreNontrivial) {
  const zoo::Recipe r = zoo::random_torus(1);
  const CoefficientTable t = coefficients_a(r.action, *r.tau, 20);
  EXPECT_GT(t.support(), 0);
  EXPECT_EQ(t.signed_sum(), 0);
}

// --- writhe difference ------------------------------------------------------

TEST(WritheDifference, ZeroCases) {
  EXPECT_EQ(euler_via_writhe_difference(with_identity_alpha(make_translation(Vector(1, 0))), fold(0.8, 0.3)).value, 0);
  const zoo::Recipe shear = zoo::torus_shear();
  EXPECT_EQ(euler_via_writhe_difference(shear.action, *shear.tau).value, 0);
  const zoo::Recipe rot = zoo::commuting_rotation_twist();
  EXPECT_EQ(euler_via_writhe_difference(rot.action, *rot.tau).value, euler_via_lift(rot.action, *rot.lift).value);
}

TEST(WritheDifference, NonSmoothActionNotCertified) {
  const zoo::Recipe r = zoo::bestvina(1);
  EXPECT_FALSE(euler_via_writhe_difference(r.action, *r.tau).certified);
}

// --- covering trick -----------------------------------------------------------

TEST(Covering, WeightIsClamp) {
  EXPECT_EQ(covering_weight(3, 2), 2);
  EXPECT_EQ(covering_weight(3, 10), 7);
  EXPECT_EQ(covering_weight(3, -10), -7);
  EXPECT_EQ(covering_weight(3, 7), 7);
  for (int i = -20; i <= 20; ++i) EXPECT_EQ(covering_weight(20, i), i);
}

TEST(Covering, TorusShearIdentityHolds) {
  const zoo::Recipe r = zoo::torus_shear();
  const CoveringTrickReport c = covering_trick_check(r.action, *r.tau, 1, 10);
  EXPECT_TRUE(c.passed);
  EXPECT_EQ(c.weighted_sum, 0);
  EXPECT_EQ(c.direct, c.convolution);
}

TEST(Covering, IdentityAlphaAllZero) {
  const PlanarAction act = with_identity_alpha(make_translation(Vector(1, 0)));
  const CoveringTrickReport c = covering_trick_check(act, fold(1.3, 0.4), 1, 10);
  for (const auto& [j, v] : c.direct) EXPECT_EQ(v, 0) << j;
}

TEST(Covering, OrbitBlockSpansTranslates) {
  const SampledCurve t = orbit_block(make_translation(Vector(1, 0)), fold(0.2, 0.3), 2);
  EXPECT_LT((t.start() - Point(-2, 0)).norm(), 1e-12);
  EXPECT_LT((t.end() - Point(3, 0)).norm(), 1e-12);
  EXPECT_TRUE(is_embedded(t));
}

// --- free actions -------------------------------------------------------------

TEST(Properness, Verdicts) {
  EXPECT_EQ(orbit_properness_probe(make_translation(Vector(1, 0)), Point(0, 0), 500).verdict, Properness::ProperLike);
  EXPECT_EQ(orbit_properness_probe(make_rotation(zoo::kGoldenAngle), Point(1, 0), 5000).verdict, Properness::Returns);
  EXPECT_EQ(orbit_properness_probe(make_dilation(2.0), Point(1.4, 0), 200).verdict, Properness::Returns);
}

TEST(FreeArc, SegmentUnderTranslation) {
  EXPECT_TRUE(is_free_arc(make_translation(Vector(1, 0)), segment(Point(0, 0), Point(1, 0))));
}

TEST(FreeArc, FoldCrossingItsTranslate) {
  EXPECT_FALSE(is_free_arc(make_translation(Vector(1, 0)), fold(1.2, 0.3)));
}

TEST(FreeArc, NearFixedPointReported) {
  const MapExpr rot = make_rotation(2.0, Point(0.5, 0.3));
  const SampledCurve tau = segment(Point(0, 0), eval(rot, Point(0, 0)));
  EXPECT_EQ(code_of([&] { is_free_arc(rot, tau); }), ErrorCode::FixedPointSuspected);
}

TEST(FreeArc, TranslatesOfFreeArcEmbedded) {
  const MapExpr shift = make_translation(Vector(1, 0.2));
  const SampledCurve tau = hermite(Point(0, 0), Vector(1, 1), Point(1, 0.2), Vector(1, 1));
  ASSERT_TRUE(is_free_arc(shift, tau));
  std::vector<SampledCurve> pieces;
  for (int i = -10; i <= 10; ++i) pieces.push_back(push_forward(power(shift, i), tau));
  EXPECT_TRUE(is_embedded(concatenate(pieces, false)));
}

TEST(CanonicalWrithe, FreeArcIsZero) {
  EXPECT_EQ(canonical_writhe(make_translation(Vector(1, 0)), segment(Point(0, 0), Point(1, 0)), 5).value, 0);
}

TEST(CanonicalWrithe, TwistsCounted) {
  const MapExpr shift = make_translation(Vector(1, 0));
  for (int k = -3; k <= 3; ++k) {
    const CanonicalWrithe w = canonical_writhe(shift, add_twist(segment(Point(0, 0), Point(1, 0)), k), 5);
    EXPECT_EQ(w.value, k) << k;
    EXPECT_EQ(w.b.at(1), k);
    EXPECT_EQ(w.b.at(-1), -k);
  }
}

// --- properties ---------------------------------------------------------------

TEST(EulerProperty, CrossMethodAgreementOnRandomTori) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const zoo::Recipe r = zoo::random_torus(seed);
    const int lift = euler_via_lift(r.action, *r.lift).value;
    EXPECT_EQ(lift, 0);
    EXPECT_EQ(euler_via_graphical(r.action, r.graphical_basepoint).value, lift) << seed;
    EXPECT_EQ(euler_via_signed_sum(r.action, *r.tau, 20).value, lift) << seed;
    EXPECT_EQ(euler_via_writhe_difference(r.action, *r.tau).value, lift) << seed;
  }
}

TEST(EulerProperty, CoveringTrickOnRandomTori) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const zoo::Recipe r = zoo::random_torus(seed);
    for (int n : {1, 2, 3}) {
      const CoveringTrickReport c = covering_trick_report(r.action, *r.tau, n, 0);
      EXPECT_TRUE(c.passed) << seed << " " << n;
      EXPECT_EQ(c.direct, c.convolution) << seed << " " << n;
    }
  }
}

TEST(EulerProperty, MultiplicativityUnderSubgroup) {
  for (std::uint64_t seed : {2u, 5u}) {
    const zoo::Recipe r = zoo::random_torus(seed);
    const int e = euler_via_signed_sum(r.action, *r.tau, 20).value;
    for (int n : {1, 2}) {
      const MapExpr big = power(r.action.b(1), 2 * n + 1);
      const PlanarAction sub = PlanarAction::surface(1, {r.action.a(1), big});
      const SampledCurve block = orbit_block(r.action.b(1), *r.tau, n);
      EXPECT_EQ(euler_via_signed_sum(sub, block, 8).value, (2 * n + 1) * e);
    }
  }
}

TEST(EulerProperty, HomotopyInvariance) {
  const zoo::Recipe r = zoo::random_torus(3);
  const int e = euler_via_signed_sum(r.action, *r.tau, 12).value;
  for (std::uint64_t seed = 100; seed < 150; ++seed)
    EXPECT_EQ(euler_via_signed_sum(r.action, perturb_arc(*r.tau, 0.05, seed), 12).value, e) << seed;
}

TEST(EulerProperty, PerturbationKeepsEndGerms) {
  const SampledCurve tau = fold(1.0, 0.4);
  const SampledCurve p = perturb_arc(tau, 0.1, 7);
  EXPECT_LT((p.start() - tau.start()).norm(), 1e-12);
  EXPECT_LT((p.end() - tau.end()).norm(), 1e-12);
  EXPECT_LT((p.start_tangent() - tau.start_tangent()).norm(), 1e-9);
  EXPECT_LT((p.end_tangent() - tau.end_tangent()).norm(), 1e-9);
}

TEST(EulerProperty, CrossingBookkeeping) {
  // the fold's axis crossing sweeps over the orbit point (3, 0)
  const PlanarAction act = zoo::torus_shear().action;
  const CoefficientTable before = coefficients_a(act, fold(2.4, 0.5), 8);
  const CoefficientTable after = coefficients_a(act, fold(2.6, 0.5), 8);
  for (bool image : {false, true}) {
    std::map<int, int> b = term_counts(before, image);
    std::map<int, int> a = term_counts(after, image);
    std::map<int, int> change;
    for (int i = -8; i <= 8; ++i)
      if (a[i] != b[i]) change[i] = a[i] - b[i];
    ASSERT_EQ(change.size(), 4u) << image;
    EXPECT_EQ(std::abs(change[3]), 1);
    EXPECT_EQ(change[3], -change[2]);
    EXPECT_EQ(std::abs(change[-2]), 1);
    EXPECT_EQ(change[-2], -change[-3]);
  }
  for (int i = -8; i <= 8; ++i) EXPECT_EQ(before.at(i), after.at(i)) << i;
}

TEST(EulerProperty, CanonicalWritheParity) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> k(-2, 2);
  for (int trial = 0; trial < 15; ++trial) {
    const Vector v(1.0, 0.5 * u(rng));
    const MapExpr shift = make_translation(v);
    const Vector d = v + Vector(0.3 * u(rng), 0.3 * u(rng));
    const SampledCurve arc = hermite(Point::Zero(), d, Point::Zero() + v, d);
    const int twists = k(rng);
    const CanonicalWrithe w = canonical_writhe(shift, add_twist(arc, twists), 6);
    EXPECT_EQ(w.w % 2, 0);
    EXPECT_EQ(w.value, twists);
  }
}

TEST(EulerProperty, PullbackInvariance) {
  for (int n : {1, 2}) {
    const int base = euler_via_lift(zoo::bestvina(n).action, *zoo::bestvina(n).lift).value;
    for (int g : {2, 3}) {
      const zoo::Recipe r = zoo::pullback_degree_one(zoo::bestvina(n), g);
      EXPECT_EQ(euler_via_lift(r.action, *r.lift).value, base);
      EXPECT_EQ(euler_via_graphical(r.action, r.graphical_basepoint).value, base);
    }
  }
}

// --- concurrency ----------------------------------------------------------------

namespace {
struct ThreadsEnv {
  explicit ThreadsEnv(const char* n) { setenv("EULER_PLANE_THREADS", n, 1); }
  ~ThreadsEnv() { unsetenv("EULER_PLANE_THREADS"); }
};
}  // namespace

TEST(Concurrency, TablesIndependentOfWorkerCount) {
  const zoo::Recipe r = zoo::random_torus(2);
  CoefficientTable serial, threaded;
  {
    ThreadsEnv one("1");
    serial = coefficients_a(r.action, *r.tau, 20);
  }
  {
    ThreadsEnv four("4");
    threaded = coefficients_a(r.action, *r.tau, 20);
  }
  EXPECT_EQ(serial.values, threaded.values);
  EXPECT_EQ(serial.tail_bound, threaded.tail_bound);
  ASSERT_EQ(serial.crossings.size(), threaded.crossings.size());
  for (std::size_t k = 0; k < serial.crossings.size(); ++k) {
    EXPECT_EQ(serial.crossings[k].index, threaded.crossings[k].index);
    EXPECT_EQ(serial.crossings[k].event.location, threaded.crossings[k].event.location);
  }
}

TEST(Concurrency, ErrorsAreDeterministic) {
  // the window is too small for the fold: TailNotVanished either way
  ThreadsEnv four("4");
  const PlanarAction act = zoo::torus_shear().action;
  EXPECT_EQ(code_of([&] { euler_via_signed_sum(act, fold(2.3, 0.4), 2); }), ErrorCode::TailNotVanished);
}
