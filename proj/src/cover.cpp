#include "euler_plane/cover.hpp"

#include <cmath>
#include <numbers>

#include "euler_plane/error.hpp"

namespace euler_plane {

namespace {

double arg(const Point& p, const Point& c) { return std::atan2(p.y() - c.y(), p.x() - c.x()); }

// Polar path angle change, the same branch polar_path uses.
double polar_step(const Point& c, const Point& from, const Point& to) { return wrap_angle(arg(to, c) - arg(from, c)); }

std::string describe(const Point& p) { return "(" + std::to_string(p.x()) + ", " + std::to_string(p.y()) + ")"; }

class ImageTracker {
 public:
  ImageTracker(const LiftContext& ctx, const MapExpr& g, const Parametrization& path) : ctx_(ctx), g_(g), path_(path) {}

  double run() {
    constexpr int kGrid = 32;
    double total = 0.0;
    double s0 = 0.0;
    Point q0 = image(0.0);
    for (int i = 1; i <= kGrid; ++i) {
      const double s1 = static_cast<double>(i) / kGrid;
      const Point q1 = image(s1);
      total += refine(s0, q0, s1, q1, 0);
      s0 = s1;
      q0 = q1;
    }
    return total;
  }

 private:
  Point image(double s) {
    const Point q = eval(g_, path_(s).point);
    if (!ctx_.allowed(q))
      throw Error(ErrorCode::ForbiddenRegionViolated,
                  "image path enters the forbidden disk at " + describe(q) + "; enlarge R or move the basepoint");
    return q;
  }

  double refine(double s0, const Point& q0, double s1, const Point& q1, int depth) {
    const double sm = 0.5 * (s0 + s1);
    const Point qm = image(sm);
    const Point& c = ctx_.center;
    const double a0 = polar_step(c, q0, qm);
    const double a1 = polar_step(c, qm, q1);
    const double near = std::min((q0 - c).norm(), (q1 - c).norm());
    const bool fine = std::abs(a0) < 0.05 && std::abs(a1) < 0.05 && (q1 - q0).norm() < 0.25 * near;
    if (fine) return a0 + a1;
    if (depth > 40) throw Error(ErrorCode::SamplingFailed, "image path could not be resolved");
    return refine(s0, q0, sm, qm, depth + 1) + refine(sm, qm, s1, q1, depth + 1);
  }

  const LiftContext& ctx_;
  const MapExpr& g_;
  const Parametrization& path_;
};

double connecting_change(const LiftContext& ctx, const Parametrization& connecting) {
  return image_angle_change(ctx, MapExpr(), connecting);
}

}  // namespace

LiftContext LiftContext::puncture(const Point& center, double forbidden_radius, const Point& z0) {
  LiftContext ctx;
  ctx.mode = LiftMode::Puncture;
  ctx.center = center;
  ctx.forbidden_radius = forbidden_radius;
  ctx.z0 = z0;
  ctx.theta0 = arg(z0, center);
  if (!ctx.allowed(z0)) throw Error(ErrorCode::InvalidArgument, "basepoint inside the forbidden disk");
  return ctx;
}

LiftContext LiftContext::infinity(double radius, const Point& z0) {
  LiftContext ctx = puncture(Point::Zero(), radius, z0);
  ctx.mode = LiftMode::Infinity;
  return ctx;
}

bool LiftContext::allowed(const Point& p) const {
  // points on the boundary circle itself are allowed
  return (p - center).norm() >= forbidden_radius * (1.0 - 1e-12);
}

LiftedPoint base_lift(const LiftContext& ctx) { return {ctx.z0, ctx.theta0}; }

double arg_continuation(const SampledCurve& path, double initial_angle, const Point& center) {
  double angle = initial_angle;
  const auto& s = path.samples();
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((s[i].point - center).norm() < 1e-9) throw Error(ErrorCode::PathHitsCenter, "path meets the centre");
    if (i == 0) continue;
    const double step = polar_step(center, s[i - 1].point, s[i].point);
    if (std::abs(step) >= 0.5 * std::numbers::pi)
      throw Error(ErrorCode::SamplingFailed, "path too coarse near the centre for argument tracking");
    angle += step;
  }
  return angle;
}

Parametrization polar_path(const Point& center, const Point& from, const Point& to) {
  const double l0 = std::log((from - center).norm());
  const double l1 = std::log((to - center).norm());
  const double th0 = arg(from, center);
  const double dth = polar_step(center, from, to);
  return [=](double s) {
    const double r = std::exp(l0 + s * (l1 - l0));
    const double th = th0 + s * dth;
    const Vector u(std::cos(th), std::sin(th));
    return PointVel{center + r * u, r * (l1 - l0) * u + r * dth * perp(u)};
  };
}

double image_angle_change(const LiftContext& ctx, const MapExpr& g, const Parametrization& path) {
  return ImageTracker(ctx, g, path).run();
}

LiftedPoint lifted_apply(const LiftContext& ctx, const MapExpr& g, const LiftedPoint& z, const Parametrization& connecting) {
  if (!ctx.allowed(z.base)) throw Error(ErrorCode::ForbiddenRegionViolated, "lifted point inside the forbidden disk");
  const Point gz0 = eval(g, ctx.z0);
  const double reference = image_angle_change(ctx, MapExpr(), polar_path(ctx.center, ctx.z0, gz0));
  const double along = connecting_change(ctx, connecting);
  // the sheet of z relative to the connecting path
  const double sheet = z.angle - ctx.theta0 - along;
  return {eval(g, z.base), ctx.theta0 + reference + image_angle_change(ctx, g, connecting) + sheet};
}

LiftedPoint lifted_apply(const LiftContext& ctx, const MapExpr& g, const LiftedPoint& z) {
  return lifted_apply(ctx, g, z, polar_path(ctx.center, ctx.z0, z.base));
}

LiftedPoint lifted_apply_inverse(const LiftContext& ctx, const MapExpr& g, const LiftedPoint& z) {
  if (!ctx.allowed(z.base)) throw Error(ErrorCode::ForbiddenRegionViolated, "lifted point inside the forbidden disk");
  const Point w = eval(inverse(g), z.base);
  if (!ctx.allowed(w)) throw Error(ErrorCode::ForbiddenRegionViolated, "preimage inside the forbidden disk at " + describe(w));
  const Parametrization to_w = polar_path(ctx.center, ctx.z0, w);
  const double reference = image_angle_change(ctx, MapExpr(), polar_path(ctx.center, ctx.z0, eval(g, ctx.z0)));
  // solve lifted_apply(g, (w, phi)) = z for phi
  const double phi = z.angle - reference - image_angle_change(ctx, g, to_w) + polar_step(ctx.center, ctx.z0, w);
  return {w, phi};
}

DeckReport deck_report(const LiftContext& ctx, const Word& word, const PlanarAction& action) {
  LiftedPoint z = base_lift(ctx);
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    const MapExpr& g = action.generators.at(static_cast<std::size_t>(it->generator));
    z = it->inverse ? lifted_apply_inverse(ctx, g, z) : lifted_apply(ctx, g, z);
  }
  DeckReport r;
  r.return_error = (z.base - ctx.z0).norm();
  if (r.return_error > 1e-6 * std::max(1.0, ctx.z0.norm()))
    throw Error(ErrorCode::NotARelator, "word moves the basepoint by " + std::to_string(r.return_error));
  r.angle_change = z.angle - ctx.theta0;
  const double turns = r.angle_change / kTwoPi;
  r.value = static_cast<int>(std::lround(turns));
  r.residue = turns - r.value;
  if (std::abs(r.residue) >= 0.05)
    throw Error(ErrorCode::ResidueTooLarge, "deck angle residue " + std::to_string(r.residue));
  return r;
}

int deck_translation(const LiftContext& ctx, const Word& word, const PlanarAction& action) {
  return deck_report(ctx, word, action).value;
}

}  // namespace euler_plane
