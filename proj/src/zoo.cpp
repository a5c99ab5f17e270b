#include "euler_plane/zoo.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "euler_plane/error.hpp"

namespace euler_plane::zoo {

namespace {

constexpr double kPi = std::numbers::pi;

SampledCurve graph_arc(std::vector<double> coeffs) {
  // (t, sum_m c_m sin(2 pi m t)): equal tangents at both ends
  return SampledCurve::sample(
      [c = std::move(coeffs)](double t) {
        double y = 0.0;
        double dy = 0.0;
        for (std::size_t m = 1; m <= c.size(); ++m) {
          y += c[m - 1] * std::sin(kTwoPi * m * t);
          dy += c[m - 1] * kTwoPi * m * std::cos(kTwoPi * m * t);
        }
        return PointVel{Point(t, y), Vector(1.0, dy)};
      },
      false);
}

int as_int(const std::string& key, double v) {
  if (v != std::round(v) || std::abs(v) > 1e6) throw Error(ErrorCode::BadParameter, key + " must be an integer");
  return static_cast<int>(v);
}

}  // namespace

Recipe bestvina(int n, double r_in, double r_out, double lambda) {
  if (!(r_in > 0 && r_out > r_in && lambda > 1)) throw Error(ErrorCode::BadParameter, "need 0 < r_in < r_out and lambda > 1");
  const MapExpr core = power(make_annulus_twist(Point::Zero(), r_in, r_out, 1), n);
  const MapExpr beta = make_dilation(lambda);
  Recipe r;
  r.name = "bestvina";
  r.parameters = {{"n", n}, {"r_in", r_in}, {"r_out", r_out}, {"lambda", lambda}};
  r.action = PlanarAction::surface(1, {lazy_twist_product(core, beta, IndexSet::All), beta});
  r.expected = n;
  // halfway (geometrically) between the first two annuli
  const Point p(std::sqrt(r_out * lambda * r_in), 0.0);
  r.action.fixed_point = p;
  r.tau = SampledCurve::sample(
      [p, lambda](double t) {
        const double s = std::pow(lambda, t);
        return PointVel{p * s, p * s * std::log(lambda)};
      },
      false);
  r.lift = LiftContext::puncture(Point::Zero(), 0.05 * r_in, p);
  r.graphical_basepoint = p;
  return r;
}

Recipe genus2_smooth(int n) {
  const MapExpr core = power(make_annulus_twist(Point::Zero(), 0.9, 1.1, 1), n);
  const MapExpr beta = make_dilation(2.0);
  const MapExpr gamma = make_step_translation(Vector(3, 0), -3, -2);
  Recipe r;
  r.name = "genus2_smooth";
  r.parameters = {{"n", n}};
  r.action = PlanarAction::surface(2, {lazy_twist_product(core, beta, IndexSet::NonNegative), beta, gamma,
                                       lazy_twist_product(core, gamma, IndexSet::NonNegative)});
  r.expected = n;
  // far outside every annulus that could reach the polar reference paths
  r.lift = LiftContext::infinity(60.0, Point(120, 0));
  r.graphical_basepoint = Point(0.3, 0.2);
  return r;
}

Recipe torus_shear(double amplitude) {
  Recipe r;
  r.name = "torus_shear";
  r.parameters = {{"amplitude", amplitude}};
  r.action = PlanarAction::surface(1, {make_strip_shear(-1, 1, amplitude), make_translation(Vector(1, 0))});
  r.action.fixed_point = Point::Zero();
  r.expected = 0;
  r.tau = graph_arc({0.3});
  r.lift = LiftContext::infinity(10.0, Point(20, 0));
  r.graphical_basepoint = Point(0.3, 0.4);
  return r;
}

Recipe commuting_rotation_twist(double theta, int k) {
  if (!(std::abs(theta) < kPi)) throw Error(ErrorCode::BadParameter, "theta must lie in (-pi, pi)");
  Recipe r;
  r.name = "commuting_rotation_twist";
  r.parameters = {{"theta", theta}, {"k", k}};
  r.action = PlanarAction::surface(1, {make_annulus_twist(Point::Zero(), 0.9, 1.1, k), make_rotation(theta)});
  r.action.fixed_point = Point(2, 0);
  r.expected = 0;
  // dips through the twist annulus and back out
  r.tau = SampledCurve::sample(
      [theta](double t) {
        const double s = std::sin(kPi * t);
        const double rad = 2.0 - 1.2 * s * s;
        const double drad = -1.2 * kPi * std::sin(kTwoPi * t);
        const Vector u(std::cos(theta * t), std::sin(theta * t));
        return PointVel{rad * u, drad * u + rad * theta * perp(u)};
      },
      false);
  r.lift = LiftContext::puncture(Point::Zero(), 0.05, Point(2, 0));
  r.graphical_basepoint = Point(2, 0);
  return r;
}

Recipe free_translations(const Vector& v1, const Vector& v2) {
  if (std::abs(cross(v1, v2)) < 1e-9) throw Error(ErrorCode::BadParameter, "translation vectors must be independent");
  Recipe r;
  r.name = "free_translations";
  r.parameters = {{"v1x", v1.x()}, {"v1y", v1.y()}, {"v2x", v2.x()}, {"v2y", v2.y()}};
  r.action = PlanarAction::surface(1, {make_translation(v1), make_translation(v2)});
  r.expected = 0;
  r.free_arc = segment(Point::Zero(), v1);
  const double radius = 5.0 * std::max({v1.norm(), v2.norm(), 1.0});
  r.lift = LiftContext::infinity(radius, Point(2 * radius, 0));
  r.graphical_basepoint = Point::Zero();
  return r;
}

Recipe trivial() {
  Recipe r;
  r.name = "trivial";
  r.action = PlanarAction::surface(1, {MapExpr(), MapExpr()});
  r.action.fixed_point = Point::Zero();
  r.expected = 0;
  r.lift = LiftContext::puncture(Point::Zero(), 0.05, Point(1, 0));
  r.graphical_basepoint = Point(0.3, 0.4);
  return r;
}

Recipe pullback_degree_one(const Recipe& base, int genus) {
  if (base.action.genus != 1) throw Error(ErrorCode::BadParameter, "pullback needs a genus-one base");
  if (genus < 2) throw Error(ErrorCode::BadParameter, "pullback genus must be at least 2");
  std::vector<MapExpr> gens = base.action.generators;
  gens.resize(static_cast<std::size_t>(2 * genus));
  Recipe r;
  r.name = "pullback_degree_one";
  r.parameters = base.parameters;
  r.parameters["genus"] = genus;
  r.action = PlanarAction::surface(genus, gens);
  r.action.fixed_point = base.action.fixed_point;
  r.expected = base.expected;
  r.lift = base.lift;
  r.graphical_basepoint = base.graphical_basepoint;
  return r;
}

Recipe random_torus(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  const double amplitude = uniform(0.2, 0.6) * (uniform(0, 1) < 0.5 ? -1 : 1);
  const double band = uniform(0.8, 1.5);
  // conjugator supported in disks centred at half-integers on x, so it is the
  // identity near every orbit point (i, 0)
  std::vector<MapExpr> factors;
  const int count = 1 + static_cast<int>(uniform(0, 2));
  for (int k = 0; k < count; ++k) {
    const Point c(std::floor(uniform(-1, 2)) + 0.5, uniform(-0.6, 0.6));
    factors.push_back(make_local_rotation(c, 0.15, uniform(0.3, 0.45), uniform(-2, 2)));
  }
  const MapExpr phi = compose(factors);
  const MapExpr phi_inv = inverse(phi);
  Recipe r;
  r.name = "random_torus";
  r.parameters = {{"seed", static_cast<double>(seed)}};
  // twists about every orbit point make alpha(tau) wind around the translates
  const int winds = uniform(0, 1) < 0.5 ? -1 : 1;
  const MapExpr shift = make_translation(Vector(1, 0));
  const MapExpr twists = lazy_twist_product(make_annulus_twist(Point::Zero(), 0.2, 0.35, winds), shift, IndexSet::All);
  r.action = PlanarAction::surface(1, {compose({phi, make_strip_shear(-band, band, amplitude), twists, phi_inv}),
                                       compose({phi, shift, phi_inv})});
  r.action.fixed_point = Point::Zero();
  r.expected = 0;
  // an embedded fold reaching over a few translates: upper half for t < 1/2,
  // lower half after, meeting the axis only at x = 0, 1/2 + reach, 1
  double reach = uniform(0.5, 2.5);
  if (const double f = reach + 0.5 - std::floor(reach + 0.5); f < 0.15 || f > 0.85) reach += 0.5;
  const double height = uniform(0.3, 0.8);
  const double wobble = uniform(-0.5, 0.5);
  r.tau = SampledCurve::sample(
      [=](double t) {
        const double s = std::sin(kPi * t);
        const double sn = std::sin(kTwoPi * t);
        const double cs = std::cos(kTwoPi * t);
        const double y = height * sn * (1 + wobble * cs);
        const double dy = height * kTwoPi * (cs * (1 + wobble * cs) - wobble * sn * sn);
        return PointVel{Point(t + reach * s * s, y), Vector(1 + reach * kPi * sn, dy)};
      },
      false);
  r.lift = LiftContext::infinity(10.0, Point(20, 0));
  r.graphical_basepoint = Point(0.3, 0.4);
  return r;
}

std::vector<CatalogEntry> catalog() {
  return {
      {"bestvina", {{"n", 1}, {"r_in", 0.9}, {"r_out", 1.1}, {"lambda", 2}},
       "genus 1, twists in concentric annuli accumulating at 0, with a dilation (Euler number n)"},
      {"genus2_smooth", {{"n", 1}}, "genus 2, smooth, [delta,gamma] = tau^n = [alpha,beta] (Euler number n)"},
      {"torus_shear", {{"amplitude", 0.4}}, "genus 1, strip shear and translation, proper orbit (Euler number 0)"},
      {"commuting_rotation_twist", {{"theta", kGoldenAngle}, {"k", 1}},
       "genus 1, twist and rotation about a common fixed point (Euler number 0)"},
      {"free_translations", {{"v1x", 1}, {"v1y", 0}, {"v2x", 0}, {"v2y", 1}}, "genus 1, two translations (free)"},
      {"trivial", {}, "genus 1, both generators the identity"},
      {"pullback_degree_one", {{"genus", 2}, {"n", 1}}, "bestvina(n) pulled back along a degree-one map"},
      {"random_torus", {{"seed", 1}}, "genus 1, conjugated shear torus with a random arc"},
  };
}

Recipe make(const std::string& name, const std::map<std::string, double>& parameters) {
  const std::vector<CatalogEntry> all = catalog();
  const CatalogEntry* entry = nullptr;
  for (const CatalogEntry& e : all)
    if (e.name == name) entry = &e;
  if (!entry) throw Error(ErrorCode::UnknownPrimitive, "unknown recipe '" + name + "'");
  std::map<std::string, double> p = entry->defaults;
  for (const auto& [key, value] : parameters) {
    if (!p.count(key)) throw Error(ErrorCode::BadParameter, "recipe " + name + " has no parameter '" + key + "'");
    p[key] = value;
  }
  if (name == "bestvina") return bestvina(as_int("n", p["n"]), p["r_in"], p["r_out"], p["lambda"]);
  if (name == "genus2_smooth") return genus2_smooth(as_int("n", p["n"]));
  if (name == "torus_shear") return torus_shear(p["amplitude"]);
  if (name == "commuting_rotation_twist") return commuting_rotation_twist(p["theta"], as_int("k", p["k"]));
  if (name == "free_translations") return free_translations(Vector(p["v1x"], p["v1y"]), Vector(p["v2x"], p["v2y"]));
  if (name == "trivial") return trivial();
  if (name == "pullback_degree_one") return pullback_degree_one(bestvina(as_int("n", p["n"])), as_int("genus", p["genus"]));
  const int seed = as_int("seed", p["seed"]);
  if (seed < 0) throw Error(ErrorCode::BadParameter, "seed must be nonnegative");
  return random_torus(static_cast<std::uint64_t>(seed));
}

EulerReport run(const Recipe& recipe, Method method, const RunOptions& options) {
  switch (method) {
    case Method::Lift:
      if (!recipe.lift) throw Error(ErrorCode::NotApplicable, recipe.name + " has no lift context");
      return euler_via_lift(recipe.action, *recipe.lift);
    case Method::Graphical:
      return euler_via_graphical(recipe.action, recipe.graphical_basepoint);
    case Method::SignedSum:
      if (!recipe.tau) throw Error(ErrorCode::NotApplicable, recipe.name + " has no fixed point of a1 with an arc");
      return euler_via_signed_sum(recipe.action, *recipe.tau, options.N, options.signed_sum);
    case Method::WritheDifference:
      if (!recipe.tau) throw Error(ErrorCode::NotApplicable, recipe.name + " has no fixed point of a1 with an arc");
      return euler_via_writhe_difference(recipe.action, *recipe.tau);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown method");
}

}  // namespace euler_plane::zoo
