#include "euler_plane/curve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "euler_plane/error.hpp"

namespace euler_plane {

namespace {

CurveSample make_sample(const Parametrization& f, double t) {
  const PointVel pv = f(t);
  const double speed = pv.velocity.norm();
  if (!(speed > 1e-300) || !std::isfinite(speed) || !pv.point.allFinite())
    throw Error(ErrorCode::SamplingFailed, "curve is not immersed at t=" + std::to_string(t));
  return {t, pv.point, pv.velocity / speed};
}

double turn(const Vector& a, const Vector& b) { return std::abs(signed_angle<double>(a, b)); }

class Sampler {
 public:
  Sampler(const Parametrization& f, const SamplingOptions& o) : f_(f), o_(o) {}

  // Appends samples in (s0, s1], s1 included.
  void refine(const CurveSample& s0, const CurveSample& s1, int depth, std::vector<CurveSample>& out) {
    const CurveSample sm = make_sample(f_, 0.5 * (s0.t + s1.t));
    const bool coarse = turn(s0.tangent, s1.tangent) > o_.max_turn || turn(s0.tangent, sm.tangent) > o_.max_turn ||
                        turn(sm.tangent, s1.tangent) > o_.max_turn || (s1.point - s0.point).norm() > o_.max_chord;
    if (!coarse) {
      out.push_back(s1);
      return;
    }
    if (depth >= o_.max_depth || out.size() > o_.max_samples)
      throw Error(ErrorCode::SamplingFailed, "adaptive refinement did not converge near t=" + std::to_string(sm.t));
    refine(s0, sm, depth + 1, out);
    refine(sm, s1, depth + 1, out);
  }

 private:
  const Parametrization& f_;
  const SamplingOptions& o_;
};

Parametrization restrict_param(Parametrization f, double t0, double t1) {
  return [f = std::move(f), t0, t1](double s) {
    PointVel pv = f(t0 + (t1 - t0) * s);
    pv.velocity *= (t1 - t0);
    return pv;
  };
}

Parametrization piecewise(std::vector<Parametrization> pieces) {
  const int n = static_cast<int>(pieces.size());
  return [pieces = std::move(pieces), n](double t) {
    const int k = std::clamp(static_cast<int>(std::floor(t * n)), 0, n - 1);
    PointVel pv = pieces[static_cast<std::size_t>(k)](t * n - k);
    pv.velocity *= n;
    return pv;
  };
}

double point_tolerance(const Point& p) { return 1e-7 * std::max(1.0, p.norm()); }

// --- segment intersection ---------------------------------------------------

int orient_sign(double v) { return v >= 0.0 ? 1 : -1; }

struct SegmentHit {
  double lambda;  // along segment of A
  double mu;      // along segment of B
};

bool segments_cross(const Point& a0, const Point& a1, const Point& b0, const Point& b1, SegmentHit& hit) {
  const Vector da = a1 - a0;
  const Vector db = b1 - b0;
  const double o1 = cross<double>(da, b0 - a0);
  const double o2 = cross<double>(da, b1 - a0);
  if (orient_sign(o1) == orient_sign(o2)) return false;
  const double o3 = cross<double>(db, a0 - b0);
  const double o4 = cross<double>(db, a1 - b0);
  if (orient_sign(o3) == orient_sign(o4)) return false;
  hit.lambda = o3 / (o3 - o4);
  hit.mu = o1 / (o1 - o2);
  return true;
}

class SegmentGrid {
 public:
  SegmentGrid(const std::vector<CurveSample>& s, double cell) : s_(s), cell_(cell) {
    for (int i = 0; i + 1 < static_cast<int>(s.size()); ++i) {
      const auto [lo, hi] = bounds(i);
      for (auto ix = lo.first; ix <= hi.first; ++ix)
        for (auto iy = lo.second; iy <= hi.second; ++iy) cells_[key(ix, iy)].push_back(i);
    }
  }

  template <typename F>
  void candidates(const Point& p0, const Point& p1, std::vector<int>& stamp, int mark, F&& visit) const {
    const auto lo = index(p0.cwiseMin(p1));
    const auto hi = index(p0.cwiseMax(p1));
    for (auto ix = lo.first; ix <= hi.first; ++ix)
      for (auto iy = lo.second; iy <= hi.second; ++iy) {
        const auto it = cells_.find(key(ix, iy));
        if (it == cells_.end()) continue;
        for (int j : it->second) {
          if (stamp[static_cast<std::size_t>(j)] == mark) continue;
          stamp[static_cast<std::size_t>(j)] = mark;
          visit(j);
        }
      }
  }

 private:
  using Cell = std::pair<std::int64_t, std::int64_t>;

  Cell index(const Point& p) const {
    return {static_cast<std::int64_t>(std::floor(p.x() / cell_)), static_cast<std::int64_t>(std::floor(p.y() / cell_))};
  }
  std::pair<Cell, Cell> bounds(int i) const {
    const Point& p0 = s_[static_cast<std::size_t>(i)].point;
    const Point& p1 = s_[static_cast<std::size_t>(i) + 1].point;
    return {index(p0.cwiseMin(p1)), index(p0.cwiseMax(p1))};
  }
  static std::int64_t key(std::int64_t ix, std::int64_t iy) { return (ix << 32) ^ (iy & 0xffffffffLL); }

  const std::vector<CurveSample>& s_;
  double cell_;
  std::unordered_map<std::int64_t, std::vector<int>> cells_;
};

double grid_cell(const SampledCurve& a, const SampledCurve& b) {
  double longest = 1e-9;
  for (const SampledCurve* c : {&a, &b}) {
    const auto& s = c->samples();
    for (std::size_t i = 0; i + 1 < s.size(); ++i) longest = std::max(longest, (s[i + 1].point - s[i].point).norm());
  }
  return longest;
}

// Newton on A(t) = B(u) from the polyline estimate; returns false if it wanders off.
bool refine_crossing(const SampledCurve& a, const SampledCurve& b, double& t, double& u) {
  const double t_init = t;
  const double u_init = u;
  for (int it = 0; it < 30; ++it) {
    const PointVel pa = a.at(t);
    const PointVel pb = b.at(u);
    const Vector f = pa.point - pb.point;
    if (f.norm() <= 1e-14 * std::max(1.0, pa.point.norm())) return true;
    Jacobian j;
    j.col(0) = pa.velocity;
    j.col(1) = -pb.velocity;
    if (std::abs(j.determinant()) < 1e-300) return false;
    const Vector step = j.inverse() * f;
    t = std::clamp(t - step.x(), 0.0, 1.0);
    u = std::clamp(u - step.y(), 0.0, 1.0);
  }
  const double residual = (a.at(t).point - b.at(u).point).norm();
  if (residual < 1e-10 * std::max(1.0, a.at(t).point.norm())) return true;
  t = t_init;
  u = u_init;
  return false;
}

}  // namespace

// --- SampledCurve -------------------------------------------------------------

SampledCurve SampledCurve::sample(Parametrization f, bool closed, const SamplingOptions& options) {
  const int n = std::max(options.initial_grid, 2);
  std::vector<CurveSample> out;
  out.reserve(static_cast<std::size_t>(4 * n));
  Sampler sampler(f, options);
  CurveSample prev = make_sample(f, 0.0);
  out.push_back(prev);
  for (int i = 1; i <= n; ++i) {
    const CurveSample next = make_sample(f, static_cast<double>(i) / n);
    sampler.refine(prev, next, 0, out);
    prev = next;
  }
  if (closed) {
    const CurveSample& first = out.front();
    const CurveSample& last = out.back();
    if ((first.point - last.point).norm() > point_tolerance(first.point) || turn(first.tangent, last.tangent) > 1e-6)
      throw Error(ErrorCode::InvalidArgument, "closed curve does not close up C^1");
  }
  return SampledCurve(std::move(f), std::move(out), closed, options);
}

double SampledCurve::max_turn() const {
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < samples_.size(); ++i) m = std::max(m, turn(samples_[i].tangent, samples_[i + 1].tangent));
  return m;
}

double SampledCurve::length() const {
  double l = 0.0;
  for (std::size_t i = 0; i + 1 < samples_.size(); ++i) l += (samples_[i + 1].point - samples_[i].point).norm();
  return l;
}

SampledCurve SampledCurve::reversed() const {
  std::vector<CurveSample> s(samples_.rbegin(), samples_.rend());
  for (auto& x : s) {
    x.t = 1.0 - x.t;
    x.tangent = -x.tangent;
  }
  return SampledCurve(restrict_param(f_, 1.0, 0.0), std::move(s), closed_, options_);
}

SampledCurve SampledCurve::restricted(double t0, double t1) const {
  return sample(restrict_param(f_, t0, t1), false, options_);
}

// --- construction -------------------------------------------------------------

SampledCurve segment(const Point& a, const Point& b) {
  if ((b - a).norm() == 0.0) throw Error(ErrorCode::InvalidArgument, "degenerate segment");
  return SampledCurve::sample([a, b](double t) { return PointVel{a + t * (b - a), b - a}; }, false);
}

SampledCurve circle(const Point& center, double radius, bool counterclockwise) {
  const double dir = counterclockwise ? 1.0 : -1.0;
  return SampledCurve::sample(
      [=](double t) {
        const double a = dir * kTwoPi * t;
        const Vector u(std::cos(a), std::sin(a));
        return PointVel{center + radius * u, dir * kTwoPi * radius * perp(u)};
      },
      true);
}

Parametrization hermite_parametrization(const Point& p0, const Vector& v0, const Point& p1, const Vector& v1) {
  return [=](double s) {
    const double s2 = s * s;
    const double s3 = s2 * s;
    const Point p = (2 * s3 - 3 * s2 + 1) * p0 + (s3 - 2 * s2 + s) * v0 + (-2 * s3 + 3 * s2) * p1 + (s3 - s2) * v1;
    const Vector v = (6 * s2 - 6 * s) * p0 + (3 * s2 - 4 * s + 1) * v0 + (-6 * s2 + 6 * s) * p1 + (3 * s2 - 2 * s) * v1;
    return PointVel{p, v};
  };
}

SampledCurve hermite(const Point& p0, const Vector& v0, const Point& p1, const Vector& v1,
                     const SamplingOptions& options) {
  return SampledCurve::sample(hermite_parametrization(p0, v0, p1, v1), false, options);
}

SampledCurve concatenate(const std::vector<SampledCurve>& pieces, bool closed) {
  if (pieces.empty()) throw Error(ErrorCode::InvalidArgument, "nothing to concatenate");
  const double n = static_cast<double>(pieces.size());
  std::vector<CurveSample> samples;
  std::vector<Parametrization> params;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const auto& s = pieces[k].samples();
    if (k > 0 && (pieces[k - 1].end() - pieces[k].start()).norm() > point_tolerance(pieces[k].start()))
      throw Error(ErrorCode::InvalidArgument, "pieces do not meet end to start");
    for (std::size_t i = (k == 0 ? 0 : 1); i < s.size(); ++i) {
      CurveSample x = s[i];
      x.t = (static_cast<double>(k) + x.t) / n;
      samples.push_back(x);
    }
    params.push_back(pieces[k].parametrization());
  }
  samples.back().t = 1.0;
  if (closed && (samples.front().point - samples.back().point).norm() > point_tolerance(samples.front().point))
    throw Error(ErrorCode::InvalidArgument, "concatenation does not close up");
  return SampledCurve(piecewise(std::move(params)), std::move(samples), closed, pieces.front().options());
}

SampledCurve push_forward(const MapExpr& expr, const SampledCurve& c) { return push_forward(expr, c, c.options()); }

SampledCurve push_forward(const MapExpr& expr, const SampledCurve& c, const SamplingOptions& options) {
  if (expr.is_identity()) return c;
  Parametrization f = [expr, base = c.parametrization()](double t) {
    const PointVel pv = base(t);
    const Jet j = eval_jet(expr, pv.point);
    return PointVel{j.value, j.jacobian * pv.velocity};
  };
  return SampledCurve::sample(std::move(f), c.closed(), options);
}

// --- invariants ---------------------------------------------------------------

double total_rotation(const SampledCurve& c) {
  double total = 0.0;
  const auto& s = c.samples();
  for (std::size_t i = 0; i + 1 < s.size(); ++i) total += signed_angle<double>(s[i].tangent, s[i + 1].tangent);
  return total;
}

namespace {
int round_turns(double radians, const char* what) {
  const double turns = radians / kTwoPi;
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) >= 0.05)
    throw Error(ErrorCode::ResidueTooLarge, std::string(what) + " residue " + std::to_string(turns - rounded));
  return static_cast<int>(rounded);
}
}  // namespace

int turning_number(const SampledCurve& c) {
  if (!c.closed()) throw Error(ErrorCode::InvalidArgument, "turning number needs a closed curve");
  return round_turns(total_rotation(c), "turning number");
}

int winding_number(const SampledCurve& c, const Point& q) {
  if (!c.closed()) throw Error(ErrorCode::InvalidArgument, "winding number needs a closed curve");
  double total = 0.0;
  const auto& s = c.samples();
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const Vector d0 = s[i].point - q;
    const Vector d1 = s[i + 1].point - q;
    if (d0.norm() < 1e-12) throw Error(ErrorCode::InvalidArgument, "point lies on the curve");
    total += signed_angle<double>(d0, d1);
  }
  return round_turns(total, "winding number");
}

namespace {

// Crossings at the resolution of the current samples. `ambiguous` is set when
// a polyline hit and its refined crossing disagree, which happens when the
// samples are too coarse to separate neighbouring crossings.
IntersectionResult intersections_at_resolution(const SampledCurve& a, const SampledCurve& b, bool& ambiguous) {
  IntersectionResult result;
  ambiguous = false;

  std::vector<Point> shared;
  if (!a.closed() && !b.closed()) {
    for (const Point& p : {a.start(), a.end()})
      for (const Point& q : {b.start(), b.end()})
        if ((p - q).norm() <= point_tolerance(p)) shared.push_back(p);
  }
  auto near_shared = [&](const Point& x) {
    return std::any_of(shared.begin(), shared.end(), [&](const Point& p) { return (x - p).norm() <= point_tolerance(p); });
  };

  const auto& sa = a.samples();
  const auto& sb = b.samples();
  const SegmentGrid grid(sb, grid_cell(a, b));
  std::vector<int> stamp(sb.size(), -1);
  for (int i = 0; i + 1 < static_cast<int>(sa.size()); ++i) {
    const CurveSample& a0 = sa[static_cast<std::size_t>(i)];
    const CurveSample& a1 = sa[static_cast<std::size_t>(i) + 1];
    grid.candidates(a0.point, a1.point, stamp, i, [&](int j) {
      const CurveSample& b0 = sb[static_cast<std::size_t>(j)];
      const CurveSample& b1 = sb[static_cast<std::size_t>(j) + 1];
      SegmentHit hit;
      if (!segments_cross(a0.point, a1.point, b0.point, b1.point, hit)) return;
      const Point linear = a0.point + hit.lambda * (a1.point - a0.point);
      if (near_shared(linear)) return;
      double t = a0.t + hit.lambda * (a1.t - a0.t);
      double u = b0.t + hit.mu * (b1.t - b0.t);
      refine_crossing(a, b, t, u);
      const PointVel pa = a.at(t);
      const PointVel pb = b.at(u);
      if (near_shared(pa.point)) return;
      const double det = cross<double>(pa.velocity.normalized(), pb.velocity.normalized());
      const double poly_det = cross<double>(a1.point - a0.point, b1.point - b0.point);
      if (std::abs(det) < 1e-9)
        throw Error(ErrorCode::NonTransverseContact,
                    "near-tangential contact at (" + std::to_string(pa.point.x()) + ", " +
                        std::to_string(pa.point.y()) + ")");
      const bool duplicate = std::any_of(result.events.begin(), result.events.end(), [&](const CrossingEvent& e) {
        return (e.location - pa.point).norm() <= point_tolerance(pa.point);
      });
      if (duplicate || orient_sign(det) != orient_sign(poly_det)) ambiguous = true;
      result.events.push_back({t, u, pa.point, det > 0 ? 1 : -1});
    });
  }
  std::sort(result.events.begin(), result.events.end(),
            [](const CrossingEvent& x, const CrossingEvent& y) { return x.t != y.t ? x.t < y.t : x.u < y.u; });
  for (const auto& e : result.events) result.count += e.sign;
  return result;
}

}  // namespace

IntersectionResult signed_intersections(const SampledCurve& a, const SampledCurve& b) {
  if (a.size() < 2 || b.size() < 2) return {};
  SampledCurve fa = a;
  SampledCurve fb = b;
  bool ambiguous = false;
  for (int level = 0; level < 4; ++level) {
    if (level > 0) {
      SamplingOptions oa = fa.options();
      SamplingOptions ob = fb.options();
      oa.max_chord /= 4;
      oa.max_turn /= 4;
      ob.max_chord /= 4;
      ob.max_turn /= 4;
      fa = SampledCurve::sample(a.parametrization(), a.closed(), oa);
      fb = SampledCurve::sample(b.parametrization(), b.closed(), ob);
    }
    IntersectionResult r = intersections_at_resolution(fa, fb, ambiguous);
    if (!ambiguous) return r;
  }
  throw Error(ErrorCode::NonTransverseContact, "crossings could not be separated at any sampling resolution");
}

std::size_t self_crossings(const SampledCurve& c) {
  const auto& s = c.samples();
  const int segments = static_cast<int>(s.size()) - 1;
  if (segments < 3) return 0;
  const SegmentGrid grid(s, grid_cell(c, c));
  std::vector<int> stamp(s.size(), -1);
  std::size_t count = 0;
  for (int i = 0; i < segments; ++i) {
    grid.candidates(s[static_cast<std::size_t>(i)].point, s[static_cast<std::size_t>(i) + 1].point, stamp, i, [&](int j) {
      if (j <= i + 1) return;
      if (c.closed() && i == 0 && j == segments - 1) return;
      SegmentHit hit;
      if (segments_cross(s[static_cast<std::size_t>(i)].point, s[static_cast<std::size_t>(i) + 1].point,
                         s[static_cast<std::size_t>(j)].point, s[static_cast<std::size_t>(j) + 1].point, hit))
        ++count;
    });
  }
  return count;
}

}  // namespace euler_plane
