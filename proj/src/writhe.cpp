#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "euler_plane/curve.hpp"
#include "euler_plane/error.hpp"

namespace euler_plane {

namespace {

constexpr double kPi = std::numbers::pi;

double dist_at(const SampledCurve& c, double t, const Point& center) { return (c.at(t).point - center).norm(); }

// Parameter where c leaves the closed ball about `center`, walking from the
// start (first exit) or from the end (last exit). NaN if c never leaves.
double exit_parameter(const SampledCurve& c, const Point& center, double radius, bool from_end) {
  const auto& s = c.samples();
  const int n = static_cast<int>(s.size());
  double inside = 0.0;
  double outside = 0.0;
  bool found = false;
  if (!from_end) {
    for (int i = 1; i < n && !found; ++i)
      if ((s[static_cast<std::size_t>(i)].point - center).norm() >= radius) {
        inside = s[static_cast<std::size_t>(i) - 1].t;
        outside = s[static_cast<std::size_t>(i)].t;
        found = true;
      }
  } else {
    for (int i = n - 2; i >= 0 && !found; --i)
      if ((s[static_cast<std::size_t>(i)].point - center).norm() >= radius) {
        inside = s[static_cast<std::size_t>(i) + 1].t;
        outside = s[static_cast<std::size_t>(i)].t;
        found = true;
      }
  }
  if (!found) return std::numeric_limits<double>::quiet_NaN();
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (inside + outside);
    if (dist_at(c, mid, center) >= radius) outside = mid; else inside = mid;
  }
  return outside;
}

// c meets the ball of `radius` about its end (or start) in a single terminal
// (initial) run along which the distance is strictly monotone.
bool monotone_run(const SampledCurve& c, double radius, bool at_end) {
  const auto& s = c.samples();
  const Point center = at_end ? c.end() : c.start();
  const int n = static_cast<int>(s.size());
  auto dist = [&](int i) { return (s[static_cast<std::size_t>(at_end ? i : n - 1 - i)].point - center).norm(); };
  auto radial = [&](int i) {
    const CurveSample& x = s[static_cast<std::size_t>(at_end ? i : n - 1 - i)];
    const double sign = at_end ? 1.0 : -1.0;
    return sign * (x.point - center).dot(x.tangent);
  };
  // indices in "towards the centre" order
  int last_out = -1;
  for (int i = 0; i < n; ++i)
    if (dist(i) >= radius) last_out = i;
  if (last_out < 0 || last_out == n - 1) return false;
  for (int i = 0; i < last_out; ++i)
    if (dist(i) < radius) return false;
  for (int i = last_out + 1; i < n; ++i) {
    if (dist(i) >= dist(i - 1)) return false;
    if (i < n - 1 && radial(i) >= 0.0) return false;
  }
  return true;
}

SamplingOptions fine_options(const SampledCurve& c, double rho) {
  SamplingOptions o = c.options();
  o.max_chord = std::min(o.max_chord, rho / 16.0);
  return o;
}

// The curve near one endpoint, as a function of the distance r to it.
struct RadialBranch {
  std::shared_ptr<const SampledCurve> c;
  Point center;
  bool at_end;
  double t_exit;

  double param(double r) const {
    double lo = at_end ? 1.0 : 0.0;  // distance 0
    double hi = t_exit;              // distance rho
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (dist_at(*c, mid, center) < r) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
  }
  // angle of the point at distance r, and d(angle)/dr
  std::pair<double, double> angle(double r) const {
    const PointVel pv = c->at(param(r));
    const Vector rel = pv.point - center;
    const double rr = rel.squaredNorm();
    const double dr_dt = rel.dot(pv.velocity) / std::sqrt(rr);
    const double dth_dt = cross<double>(rel, pv.velocity) / rr;
    return {std::atan2(rel.y(), rel.x()), dth_dt / dr_dt};
  }
  // limiting radial direction at the endpoint
  double initial_angle() const {
    const Vector d = at_end ? Vector(-c->end_tangent()) : c->start_tangent();
    return std::atan2(d.y(), d.x());
  }
};

// Blend from `templ` (at r = rho/2) to `a` (at r = rho) in polar coordinates about `center`.
class AngleBlend {
 public:
  AngleBlend(RadialBranch a, RadialBranch templ, double rho) : a_(a), t_(templ), rho_(rho) {
    double prev = wrap_angle(a_.initial_angle() - t_.initial_angle());
    d0_ = prev;
    for (int j = 1; j <= kGrid; ++j) {
      const double r = rho_ * j / kGrid;
      const double raw = a_.angle(r).first - t_.angle(r).first;
      prev += wrap_angle(raw - prev);
      table_.push_back(prev);
    }
  }

  double difference(double r) const {
    const double x = r / rho_ * kGrid;
    const int j = std::clamp(static_cast<int>(std::floor(x)), 0, kGrid - 1);
    const double lo = j == 0 ? d0_ : table_[static_cast<std::size_t>(j) - 1];
    const double hi = table_[static_cast<std::size_t>(j)];
    const double guess = lo + (x - j) * (hi - lo);
    const double raw = a_.angle(r).first - t_.angle(r).first;
    return guess + wrap_angle(raw - guess);
  }

  // s in [0,1] traverses r from rho/2 to rho (outward) or back (inward).
  Parametrization parametrization(bool outward) const {
    return [this_copy = *this, outward](double s) { return this_copy.evaluate(s, outward); };
  }

 private:
  PointVel evaluate(double s, bool outward) const {
    const double half = 0.5 * rho_;
    const double r = outward ? half + s * half : rho_ - s * half;
    const double dr_ds = outward ? half : -half;
    const auto [th_t, dth_t] = t_.angle(r);
    const auto [th_a, dth_a] = a_.angle(r);
    (void)th_a;
    const double u = (r - half) / half;
    const double w = profile::smoothstep(u);
    const double dw = profile::smoothstep_derivative(u) / half;
    const double d = difference(r);
    const double phi = th_t + w * d;
    const double dphi = dth_t + dw * d + w * (dth_a - dth_t);
    const Vector radial(std::cos(phi), std::sin(phi));
    return {a_.center + r * radial, dr_ds * (radial + r * dphi * perp(radial))};
  }

  static constexpr int kGrid = 400;
  RadialBranch a_;
  RadialBranch t_;
  double rho_;
  double d0_ = 0.0;
  std::vector<double> table_;
};

SampledCurve return_path(const SampledCurve& x, int routing) {
  const Point a = x.start();
  const Point b = x.end();
  const double chord = (b - a).norm();
  const double scale = std::max(chord, 1.0);
  const Vector u = (b - a) / chord;
  // with both germs along the chord the direct Hermite folds back on itself
  const bool folds = std::abs(cross(u, x.end_tangent())) < 1e-3 && std::abs(cross(u, x.start_tangent())) < 1e-3;
  if (routing == 0 && folds) routing = 1;
  if (routing == 0) return hermite(b, 1.5 * scale * x.end_tangent(), a, 1.5 * scale * x.start_tangent());
  const Vector side = perp((b - a) / chord) * (routing > 0 ? 1.0 : -1.0);
  const Point via = 0.5 * (a + b) + (2.0 * chord + 2.0) * side;
  const Vector v_via = (a - b) / chord * scale * 2.0;
  return concatenate({hermite(b, scale * x.end_tangent(), via, v_via), hermite(via, v_via, a, scale * x.start_tangent())},
                     false);
}

// r may touch the endpoint balls only in its own first and last runs.
bool avoids_endpoint_balls(const SampledCurve& r, double radius) {
  auto clear = [&](const Point& center, bool at_end) {
    const auto& s = r.samples();
    const int n = static_cast<int>(s.size());
    bool left = false;
    for (int k = 0; k < n; ++k) {
      const int i = at_end ? n - 1 - k : k;
      const bool inside = (s[static_cast<std::size_t>(i)].point - center).norm() < radius;
      if (!inside) left = true;
      else if (left) return false;
    }
    return true;
  };
  return clear(r.start(), false) && clear(r.end(), true);
}

int writhe_difference_aligned(const SampledCurve& x, const SampledCurve& y, int routing) {
  const Point a = x.start();
  const Point b = x.end();
  const double theta_a = signed_angle<double>(y.start_tangent(), x.start_tangent());
  const double theta_b = signed_angle<double>(y.end_tangent(), x.end_tangent());
  if (kPi - std::abs(theta_a) < 1e-6 || kPi - std::abs(theta_b) < 1e-6)
    throw Error(ErrorCode::AntipodalTangents, "alignment angle is pi");
  SampledCurve aligned = y;
  if (theta_a != 0.0 || theta_b != 0.0) {
    const double rho = std::min(free_disk_radius(y, false), free_disk_radius(y, true));
    std::vector<MapExpr> moves;
    if (theta_a != 0.0) moves.emplace_back(make_local_rotation(a, 0.5 * rho, rho, theta_a));
    if (theta_b != 0.0) moves.emplace_back(make_local_rotation(b, 0.5 * rho, rho, theta_b));
    aligned = push_forward(compose(moves), y, fine_options(y, rho));
  }
  const double ball = 0.5 * std::min(free_disk_radius(x, false), free_disk_radius(x, true));
  SampledCurve r = return_path(x, routing);
  if (!avoids_endpoint_balls(r, ball)) {
    r = return_path(x, routing == 0 ? 1 : 0);
    if (!avoids_endpoint_balls(r, ball))
      throw Error(ErrorCode::ReturnPathCrossesEndpointBall, "no return path avoids the endpoint balls");
  }
  const int tx = turning_number(concatenate({x, r}, true));
  const int ty = turning_number(concatenate({aligned, r}, true));
  // A positive twist at the end point turns the tangent once clockwise, so
  // [x] - [y] is the excess of y's closed-up turning over x's.
  return ty - tx;
}

}  // namespace

SampledCurve smooth_corners(const std::vector<SampledCurve>& arcs, double radius) {
  const std::size_t n = arcs.size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "no arcs to smooth");
  std::vector<double> exterior(n);
  for (std::size_t k = 0; k < n; ++k) {
    const SampledCurve& in = arcs[k];
    const SampledCurve& out = arcs[(k + 1) % n];
    if ((in.end() - out.start()).norm() > 1e-7 * std::max(1.0, in.end().norm()))
      throw Error(ErrorCode::InvalidArgument, "arcs do not meet at corner " + std::to_string(k));
    exterior[k] = signed_angle<double>(in.end_tangent(), out.start_tangent());
    if (kPi - std::abs(exterior[k]) < 1e-6)
      throw Error(ErrorCode::CuspCorner, "antipodal tangents at corner " + std::to_string(k));
  }

  double r = radius;
  for (int attempt = 0; attempt < 12; ++attempt, r *= 0.5) {
    std::vector<double> s0(n), s1(n);
    bool ok = true;
    for (std::size_t k = 0; k < n && ok; ++k) {
      s0[k] = exit_parameter(arcs[k], arcs[k].start(), r, false);
      s1[k] = exit_parameter(arcs[k], arcs[k].end(), r, true);
      ok = std::isfinite(s0[k]) && std::isfinite(s1[k]) && s0[k] < s1[k];
    }
    if (!ok) continue;

    std::vector<SampledCurve> pieces;
    for (std::size_t k = 0; k < n && ok; ++k) {
      const SampledCurve& in = arcs[k];
      const SampledCurve& out = arcs[(k + 1) % n];
      const PointVel p0 = in.at(s1[k]);
      const PointVel p1 = out.at(s0[(k + 1) % n]);
      const double expected = total_rotation(in.restricted(s1[k], 1.0)) + exterior[k] +
                              total_rotation(out.restricted(0.0, s0[(k + 1) % n]));
      const double chord = (p1.point - p0.point).norm();
      bool placed = false;
      for (double kappa : {1.0, 0.5, 0.25, 2.0}) {
        SampledCurve blend = hermite(p0.point, kappa * chord * p0.velocity.normalized(), p1.point,
                                     kappa * chord * p1.velocity.normalized(), in.options());
        if (std::abs(total_rotation(blend) - expected) < 0.5) {
          pieces.push_back(in.restricted(s0[k], s1[k]));
          pieces.push_back(std::move(blend));
          placed = true;
          break;
        }
      }
      ok = placed;
    }
    if (ok) return concatenate(pieces, true);
  }
  throw Error(ErrorCode::CuspCorner, "no corner blend with the minimal exterior angle");
}

void check_membership(const SampledCurve& x, const ArcSpace& space) {
  const double tol_a = 1e-6 * std::max(1.0, space.a.norm());
  const double tol_b = 1e-6 * std::max(1.0, space.b.norm());
  if ((x.start() - space.a).norm() > tol_a || (x.end() - space.b).norm() > tol_b)
    throw Error(ErrorCode::InvalidArgument, "arc endpoints differ from the arc space");
  const Vector moved = space.transport * x.start_tangent();
  if (std::abs(signed_angle<double>(moved, x.end_tangent())) > 1e-6)
    throw Error(ErrorCode::InvalidArgument, "terminal tangent is not the transported initial tangent");
}

double free_disk_radius(const SampledCurve& x, bool at_end) {
  double rho = 0.25 * (x.end() - x.start()).norm();
  for (int i = 0; i < 40 && rho > 1e-9; ++i, rho *= 0.5)
    if (monotone_run(x, rho, at_end)) return rho;
  throw Error(ErrorCode::NoFreeDisk, std::string("cannot isolate the ") + (at_end ? "terminal" : "initial") + " sub-arc");
}

SampledCurve add_twist(const SampledCurve& x, int k) {
  if (k == 0) return x;
  const double rho = free_disk_radius(x, true);
  return push_forward(MapExpr(make_annulus_twist(x.end(), 0.5 * rho, rho, k)), x, fine_options(x, rho));
}

int writhe_difference(const SampledCurve& x, const SampledCurve& y, const ArcSpace& space, int routing) {
  check_membership(x, space);
  check_membership(y, space);
  return writhe_difference_aligned(x, y, routing);
}

SampledCurve splice_near_endpoints(const SampledCurve& a, const SampledCurve& templ, double radius) {
  const Point p = a.start();
  const Point q = a.end();
  if ((templ.start() - p).norm() > 1e-6 * std::max(1.0, p.norm()) ||
      (templ.end() - q).norm() > 1e-6 * std::max(1.0, q.norm()))
    throw Error(ErrorCode::InvalidArgument, "splice needs arcs with common endpoints");

  // the blends evaluate both arcs lazily, so they keep them alive
  const auto held_a = std::make_shared<const SampledCurve>(a);
  const auto held_t = std::make_shared<const SampledCurve>(templ);
  double rho = std::min(radius, 0.25 * (q - p).norm());
  for (int attempt = 0; attempt < 12; ++attempt, rho *= 0.5) {
    if (!monotone_run(a, rho, false) || !monotone_run(a, rho, true) || !monotone_run(templ, rho, false) ||
        !monotone_run(templ, rho, true))
      continue;
    const double a0 = exit_parameter(a, p, rho, false);
    const double a1 = exit_parameter(a, q, rho, true);
    const double t0 = exit_parameter(templ, p, rho, false);
    const double t1 = exit_parameter(templ, q, rho, true);
    const RadialBranch ta{held_t, p, false, t0};
    const RadialBranch tb{held_t, q, true, t1};
    const AngleBlend start(RadialBranch{held_a, p, false, a0}, ta, rho);
    const AngleBlend end(RadialBranch{held_a, q, true, a1}, tb, rho);
    const SamplingOptions opts = fine_options(a, rho);

    const SampledCurve spliced = concatenate(
        {templ.restricted(0.0, ta.param(0.5 * rho)), SampledCurve::sample(start.parametrization(true), false, opts),
         a.restricted(a0, a1), SampledCurve::sample(end.parametrization(false), false, opts),
         templ.restricted(tb.param(0.5 * rho), 1.0)},
        false);
    if (writhe_difference_aligned(a, spliced, 0) == 0) return spliced;
  }
  throw Error(ErrorCode::WritheChanged, "splice changes the writhe class at every radius tried");
}

}  // namespace euler_plane
