#include "euler_plane/euler.hpp"

#include <cmath>
#include <map>

#include "euler_plane/error.hpp"

namespace euler_plane {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Lift: return "lift";
    case Method::Graphical: return "graphical";
    case Method::SignedSum: return "signed-sum";
    case Method::WritheDifference: return "writhe-diff";
  }
  return "?";
}

EulerReport euler_via_lift(const PlanarAction& action, const LiftContext& ctx) {
  const DeckReport deck = deck_report(ctx, surface_relator(action.genus), action);
  EulerReport r;
  r.method = Method::Lift;
  r.value = deck.value;
  r.diagnostics["angle_change"] = deck.angle_change;
  r.diagnostics["residue"] = deck.residue;
  r.diagnostics["return_error"] = deck.return_error;
  return r;
}

// --- graphical --------------------------------------------------------------

namespace {

// A prong is a germ of arc leaving z0: (generator, out) starts the arc of g,
// (generator, in) starts the arc of g^-1.
int prong_leaving(const Letter& x) { return 2 * x.generator + (x.inverse ? 1 : 0); }
int prong_returning(const Letter& x) { return 2 * x.generator + (x.inverse ? 0 : 1); }

MapExpr letter_map(const PlanarAction& action, const Letter& x) {
  const MapExpr& g = action.generators.at(static_cast<std::size_t>(x.generator));
  return x.inverse ? inverse(g) : g;
}

// Position of every prong in the counterclockwise cycle of the vertex link.
std::map<int, int> link_positions(const Word& w) {
  const std::size_t m = w.size();
  std::map<int, std::size_t> corner_of;  // B prong -> corner
  for (std::size_t k = 0; k < m; ++k) corner_of[prong_leaving(w[(k + 1) % m])] = k;
  std::map<int, int> pos;
  std::size_t corner = 0;
  for (std::size_t step = 0; step < m; ++step) {
    const int b = prong_leaving(w[(corner + 1) % m]);
    if (pos.count(b)) throw Error(ErrorCode::VertexNotImmersed, "polygon vertices are not a single class");
    pos[b] = static_cast<int>(step);
    corner = corner_of.at(prong_returning(w[corner]));
  }
  return pos;
}

// Loop at z0 leaving along `out` and arriving along `end`, through an apex on
// the side away from both germs (a circle when out == end).
SampledCurve teardrop(const Point& z0, const Vector& out, const Vector& end) {
  constexpr double size = 0.3;
  Vector n = out - end;
  n = n.norm() < 1e-6 ? perp(out) : n.normalized();
  Vector apex_dir = -(out + end);
  apex_dir = apex_dir.norm() < 1e-6 ? -out : apex_dir.normalized();
  const Point q = z0 + size * n;
  const double v = 1.5 * size;
  return concatenate({hermite(z0, v * out, q, v * apex_dir), hermite(q, v * apex_dir, z0, v * end)}, false);
}

double ccw_angle(const Vector& from, const Vector& to) {
  double a = signed_angle(from, to);
  if (a <= 0.0) a += kTwoPi;
  return a;
}

}  // namespace

std::vector<SampledCurve> default_base_arcs(const PlanarAction& action, const Point& z0) {
  const Word w = surface_relator(action.genus);
  const std::map<int, int> pos = link_positions(w);
  const double step = kTwoPi / static_cast<double>(w.size());
  const double offset = 0.3;  // keeps prongs off the coordinate axes
  auto direction = [&](int prong) {
    const double a = offset + step * pos.at(prong);
    return Vector(std::cos(a), std::sin(a));
  };
  std::vector<SampledCurve> arcs;
  for (std::size_t g = 0; g < action.generators.size(); ++g) {
    const MapExpr& map = action.generators[g];
    const Jet j = eval_jet(map, z0);
    const double m = std::max((j.value - z0).norm(), 1.0);
    const Vector out = direction(2 * static_cast<int>(g));
    const Vector in = (j.jacobian * direction(2 * static_cast<int>(g) + 1)).normalized();
    if ((j.value - z0).norm() < 1e-9)
      arcs.push_back(teardrop(z0, out, -in));
    else
      arcs.push_back(hermite(z0, m * out, j.value, -m * in));
  }
  return arcs;
}

DevelopedBoundary develop_boundary(const PlanarAction& action, const std::vector<SampledCurve>& base_arcs,
                                   const Point& z0, double corner_radius) {
  if (base_arcs.size() != action.generators.size())
    throw Error(ErrorCode::InvalidArgument, "one base arc per generator is required");
  for (std::size_t g = 0; g < base_arcs.size(); ++g) {
    const Point gz = eval(action.generators[g], z0);
    if ((base_arcs[g].start() - z0).norm() > 1e-7 || (base_arcs[g].end() - gz).norm() > 1e-7)
      throw Error(ErrorCode::InvalidArgument, "base arc " + action.names[g] + " must run from z0 to its image");
  }
  const Word w = surface_relator(action.genus);
  const std::size_t m = w.size();

  // letter pieces at z0: the arc of g, or g^-1 applied to its reversal
  std::vector<SampledCurve> pieces;
  for (const Letter& x : w) {
    const SampledCurve& arc = base_arcs[static_cast<std::size_t>(x.generator)];
    pieces.push_back(x.inverse ? push_forward(inverse(action.generators[static_cast<std::size_t>(x.generator)]), arc.reversed())
                               : arc);
  }

  DevelopedBoundary d;
  double link = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const Vector leaving = pieces[(k + 1) % m].start_tangent();
    const SampledCurve& in = pieces[k];
    const Vector back = -(differential(inverse(letter_map(action, w[k])), in.end()) * in.end_tangent());
    link += ccw_angle(leaving, back);
  }
  d.vertex_degree = static_cast<int>(std::lround(link / kTwoPi));
  if (d.vertex_degree != 1)
    throw Error(ErrorCode::VertexNotImmersed,
                "corner angles at the vertex add up to " + std::to_string(link / kTwoPi) + " turns");

  std::vector<MapExpr> prefix;
  d.vertices.push_back(z0);
  for (std::size_t k = 0; k < m; ++k) {
    SampledCurve edge = prefix.empty() ? pieces[k] : push_forward(compose(prefix), pieces[k]);
    if (edge.length() < 1e-9) throw Error(ErrorCode::DegenerateEdge, "edge " + std::to_string(k + 1) + " has no length");
    d.vertices.push_back(edge.end());
    d.edges.push_back(std::move(edge));
    prefix.push_back(letter_map(action, w[k]));
  }
  d.smoothed = smooth_corners(d.edges, corner_radius);
  d.turning = turning_number(d.smoothed);
  return d;
}

EulerReport euler_via_graphical(const PlanarAction& action, const std::vector<SampledCurve>& base_arcs, const Point& z0) {
  const DevelopedBoundary d = develop_boundary(action, base_arcs, z0);
  EulerReport r;
  r.method = Method::Graphical;
  r.value = d.turning + 1 - 2 * action.genus;
  r.diagnostics["turning"] = d.turning;  // wind(delta)
  r.diagnostics["turning_residue"] = total_rotation(d.smoothed) / kTwoPi - d.turning;
  r.diagnostics["vertex_degree"] = d.vertex_degree;
  r.diagnostics["closing_error"] = (d.vertices.back() - z0).norm();
  return r;
}

EulerReport euler_via_graphical(const PlanarAction& action, const Point& z0) {
  return euler_via_graphical(action, default_base_arcs(action, z0), z0);
}

}  // namespace euler_plane
