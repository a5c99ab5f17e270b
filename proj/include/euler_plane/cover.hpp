#pragma once

#include "euler_plane/action.hpp"
#include "euler_plane/curve.hpp"

namespace euler_plane {

enum class LiftMode { Puncture, Infinity };

/// Universal cover of the plane minus a closed disk, in (point, continuous argument)
/// coordinates. Puncture mode removes a small disk about a common fixed point;
/// infinity mode removes the disk of radius R about the origin (germs at infinity).
struct LiftContext {
  LiftMode mode = LiftMode::Puncture;
  Point center = Point::Zero();
  double forbidden_radius = 0.05;
  Point z0 = Point(1, 0);
  double theta0 = 0.0;

  static LiftContext puncture(const Point& center, double forbidden_radius, const Point& z0);
  static LiftContext infinity(double radius, const Point& z0);

  bool allowed(const Point& p) const;
};

struct LiftedPoint {
  Point base;
  double angle;  // continuous argument about ctx.center, not reduced mod 2*pi
};

/// (z0, theta0).
LiftedPoint base_lift(const LiftContext& ctx);

/// Final continuous argument about `center` along the path. Throws PathHitsCenter.
double arg_continuation(const SampledCurve& path, double initial_angle, const Point& center);

/// Path from `from` to `to`, linear in log-radius about `center` and in angle,
/// the angle step taken in (-pi, pi].
Parametrization polar_path(const Point& center, const Point& from, const Point& to);

/// Angle change about ctx.center along g(path). The image is sampled adaptively and
/// must stay outside the forbidden disk. Throws ForbiddenRegionViolated.
double image_angle_change(const LiftContext& ctx, const MapExpr& g, const Parametrization& path);

/// The lift of g fixed by its reference path z0 -> g(z0). The lifted point is
/// reached from the base lift along the polar path (or along `connecting`, which
/// must run from z0 to z.base).
LiftedPoint lifted_apply(const LiftContext& ctx, const MapExpr& g, const LiftedPoint& z);
LiftedPoint lifted_apply(const LiftContext& ctx, const MapExpr& g, const LiftedPoint& z, const Parametrization& connecting);
/// Inverse of the lift of g (not the lift of g^-1 by its own reference path).
LiftedPoint lifted_apply_inverse(const LiftContext& ctx, const MapExpr& g, const LiftedPoint& z);

struct DeckReport {
  int value = 0;
  double angle_change = 0.0;  // radians
  double residue = 0.0;       // angle_change / 2pi - value
  double return_error = 0.0;  // |final base - z0|
};

/// Lifted generators applied right to left to the base lift; the deck element
/// of a relator word in units of 2*pi. Throws NotARelator, ResidueTooLarge.
DeckReport deck_report(const LiftContext& ctx, const Word& word, const PlanarAction& action);
int deck_translation(const LiftContext& ctx, const Word& word, const PlanarAction& action);

}  // namespace euler_plane
