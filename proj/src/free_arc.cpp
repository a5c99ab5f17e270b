#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "euler_plane/error.hpp"
#include "euler_plane/euler.hpp"
#include "parallel.hpp"

namespace euler_plane {

std::string_view to_string(Properness p) {
  switch (p) {
    case Properness::ProperLike: return "proper-like";
    case Properness::Returns: return "returns";
    case Properness::Inconclusive: return "inconclusive";
  }
  return "?";
}

ProperProbe orbit_properness_probe(const MapExpr& beta, const Point& p, int horizon) {
  constexpr double kReturn = 1e-3;
  struct Visit {
    int index;
    Point point;
  };
  std::vector<Visit> orbit{{0, p}};
  ProperProbe probe;
  auto walk = [&](const MapExpr& g, int sign) {
    Point q = p;
    double far = 0.0;
    for (int i = 1; i <= horizon; ++i) {
      q = eval(g, q);
      if (!q.allFinite() || q.norm() > 1e12) return std::numeric_limits<double>::max();
      orbit.push_back({sign * i, q});
      far = (q - p).norm();
    }
    return far;
  };
  probe.forward_radius = walk(beta, 1);
  probe.backward_radius = walk(inverse(beta), -1);

  // spatial hash: only pairs in neighbouring cells can be closer than kReturn
  auto key = [](long x, long y) { return (static_cast<std::uint64_t>(x) << 32) ^ static_cast<std::uint32_t>(y); };
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells;
  probe.min_distance = kReturn;
  for (std::size_t k = 0; k < orbit.size(); ++k) {
    const long cx = std::lround(std::floor(orbit[k].point.x() / kReturn));
    const long cy = std::lround(std::floor(orbit[k].point.y() / kReturn));
    for (long dx = -1; dx <= 1; ++dx)
      for (long dy = -1; dy <= 1; ++dy) {
        const auto it = cells.find(key(cx + dx, cy + dy));
        if (it == cells.end()) continue;
        for (std::size_t other : it->second) {
          if (std::abs(orbit[other].index - orbit[k].index) <= 1) continue;
          const double d = (orbit[other].point - orbit[k].point).norm();
          if (d < probe.min_distance) {
            probe.min_distance = d;
            probe.i = orbit[other].index;
            probe.j = orbit[k].index;
          }
        }
      }
    cells[key(cx, cy)].push_back(k);
  }
  const double start = std::max(p.norm(), 1.0);
  if (probe.min_distance < kReturn)
    probe.verdict = Properness::Returns;
  else if (probe.forward_radius > 10 * start && probe.backward_radius > 10 * start)
    probe.verdict = Properness::ProperLike;
  return probe;
}

namespace {

void probe_fixed_points(const MapExpr& alpha, const std::vector<const SampledCurve*>& arcs) {
  Point lo = arcs.front()->start();
  Point hi = lo;
  for (const SampledCurve* c : arcs)
    for (const CurveSample& s : c->samples()) {
      lo = lo.cwiseMin(s.point);
      hi = hi.cwiseMax(s.point);
      if ((eval(alpha, s.point) - s.point).norm() < 1e-6)
        throw Error(ErrorCode::FixedPointSuspected, "alpha nearly fixes a point of the arc");
    }
  const Vector margin = Vector::Constant(0.1) + 0.1 * (hi - lo);
  lo -= margin;
  hi += margin;
  auto suspect = [](const Point& q) {
    return Error(ErrorCode::FixedPointSuspected,
                 "alpha nearly fixes (" + std::to_string(q.x()) + ", " + std::to_string(q.y()) + ")");
  };
  constexpr int kGrid = 40;
  std::vector<std::pair<double, Point>> best;
  for (int i = 0; i <= kGrid; ++i)
    for (int j = 0; j <= kGrid; ++j) {
      const Point q(lo.x() + (hi.x() - lo.x()) * i / kGrid, lo.y() + (hi.y() - lo.y()) * j / kGrid);
      const double moved = (eval(alpha, q) - q).norm();
      if (moved < 1e-6) throw suspect(q);
      best.emplace_back(moved, q);
    }
  // Newton on alpha(x) - x from the least displaced grid points
  const std::size_t seeds = std::min<std::size_t>(5, best.size());
  std::partial_sort(best.begin(), best.begin() + static_cast<std::ptrdiff_t>(seeds), best.end(),
                    [](const auto& x, const auto& y) { return x.first < y.first; });
  for (std::size_t k = 0; k < seeds; ++k) {
    Point x = best[k].second;
    for (int it = 0; it < 30; ++it) {
      const Jet j = eval_jet(alpha, x);
      const Vector f = j.value - x;
      if (f.norm() < 1e-9) {
        if ((x.array() >= lo.array()).all() && (x.array() <= hi.array()).all()) throw suspect(x);
        break;
      }
      const Jacobian m = j.jacobian - Jacobian::Identity();
      if (std::abs(m.determinant()) < 1e-12) break;
      x -= m.inverse() * f;
      if (!x.allFinite()) break;
    }
  }
}

double segment_distance(const Point& q, const Point& a, const Point& b) {
  const Vector ab = b - a;
  const double len2 = ab.squaredNorm();
  const double s = len2 > 0 ? std::clamp((q - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (q - (a + s * ab)).norm();
}

void check_ends(const MapExpr& alpha, const SampledCurve& c) {
  if ((eval(alpha, c.start()) - c.end()).norm() > 1e-7)
    throw Error(ErrorCode::InvalidArgument, "arc must run from p to alpha(p)");
}

}  // namespace

bool is_free_arc(const MapExpr& alpha, const SampledCurve& tau) {
  check_ends(alpha, tau);
  const SampledCurve image = push_forward(alpha, tau);
  probe_fixed_points(alpha, {&tau, &image});
  try {
    if (!signed_intersections(tau, image).events.empty()) return false;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NonTransverseContact) return false;
    throw;
  }
  // touching without crossing: proximity away from the shared point alpha(p)
  const Point shared = tau.end();
  const double keep_out = 0.02 * (tau.end() - tau.start()).norm() + 1e-9;
  const auto& s = image.samples();
  for (const CurveSample& q : tau.samples()) {
    if ((q.point - shared).norm() < keep_out) continue;
    for (std::size_t k = 0; k + 1 < s.size(); ++k) {
      if ((s[k].point - shared).norm() < keep_out && (s[k + 1].point - shared).norm() < keep_out) continue;
      if (segment_distance(q.point, s[k].point, s[k + 1].point) < 1e-4) return false;
    }
  }
  return true;
}

CanonicalWrithe canonical_writhe(const MapExpr& alpha, const SampledCurve& delta, int N) {
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "window N must be positive");
  check_ends(alpha, delta);
  const SampledCurve image = push_forward(alpha, delta);
  probe_fixed_points(alpha, {&delta, &image});
  const Point p = delta.start();
  double diameter = 0.0;
  for (const CurveSample& s : delta.samples()) diameter = std::max(diameter, (s.point - p).norm());

  CanonicalWrithe r;
  CoefficientTable& t = r.b;
  t.N = N;
  t.values.assign(static_cast<std::size_t>(2 * N + 1), 0);
  t.spliced.assign(static_cast<std::size_t>(2 * N + 1), false);
  struct Entry {
    IntersectionResult x;
    bool near = false;
  };
  const std::vector<Entry> entries = detail::parallel_map<Entry>(2 * N + 1, [&](int k) {
    const int i = k - N;
    if (i == 0) return Entry{};
    const SampledCurve moved = i == 1 ? image : push_forward(power(alpha, i), delta);
    double closest = std::numeric_limits<double>::infinity();
    for (const CurveSample& s : moved.samples()) closest = std::min(closest, (s.point - p).norm());
    return Entry{signed_intersections(delta, moved), closest <= diameter};
  });
  int last_near = 0;
  for (int i = -N; i <= N; ++i) {
    if (i == 0) continue;
    const Entry& e = entries[static_cast<std::size_t>(i + N)];
    t.values[static_cast<std::size_t>(i + N)] = e.x.count;
    for (const CrossingEvent& c : e.x.events) t.crossings.push_back({i, true, c});
    if (e.near) last_near = std::max(last_near, std::abs(i));
  }
  t.tail_bound = last_near + 1;
  if (t.tail_bound > N)
    throw Error(ErrorCode::TailNotVanished, "diameter bound " + std::to_string(t.tail_bound) + " exceeds the window");
  for (int i = t.tail_bound + 1; i <= N; ++i)
    if (t.at(i) != 0 || t.at(-i) != 0)
      throw Error(ErrorCode::TailNotVanished, "b_" + std::to_string(i) + " is nonzero beyond the diameter bound");
  r.w = t.signed_sum();
  if (r.w % 2 != 0) throw Error(ErrorCode::OddParity, "sum of b_i is odd (" + std::to_string(r.w) + ")");
  r.value = r.w / 2;
  return r;
}

}  // namespace euler_plane
