#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "euler_plane/action.hpp"
#include "euler_plane/cover.hpp"
#include "euler_plane/curve.hpp"

namespace euler_plane {

enum class Method { Lift, Graphical, SignedSum, WritheDifference };

std::string_view to_string(Method m);

struct IndexedCrossing {
  int index;        // i of beta^i(tau)
  bool from_image;  // true: X . beta^i(tau); false: tau . beta^i(tau)
  CrossingEvent event;
};

/// a_i (or b_i) on [-N, N]; index 0 is 0 by definition.
struct CoefficientTable {
  int N = 0;
  std::vector<int> values;     // values[i + N]
  std::vector<bool> spliced;   // the image arc was replaced by the splice for this index
  int tail_bound = 0;          // a_i must vanish for |i| > tail_bound
  std::vector<IndexedCrossing> crossings;
  int perturbations = 0;       // retries after a degenerate contact

  int at(int i) const { return (i < -N || i > N) ? 0 : values[static_cast<std::size_t>(i + N)]; }
  /// Largest |i| with a nonzero entry (0 if none).
  int support() const;
  /// sum_{i>0} v_i - sum_{i<0} v_i
  int signed_sum() const;
};

struct EulerReport {
  Method method = Method::Lift;
  int value = 0;
  bool certified = true;
  std::map<std::string, double> diagnostics;  // ordered for deterministic output
  std::optional<CoefficientTable> table;
  std::vector<std::string> notes;
};

// --- lift -------------------------------------------------------------------

EulerReport euler_via_lift(const PlanarAction& action, const LiftContext& ctx);

// --- graphical --------------------------------------------------------------

struct DevelopedBoundary {
  std::vector<SampledCurve> edges;  // edge k runs from vertices[k] to vertices[k+1]
  std::vector<Point> vertices;
  SampledCurve smoothed;
  int turning = 0;
  int vertex_degree = 0;
};

/// Base arcs z0 -> g(z0) whose end directions put the 4g corners of the
/// fundamental polygon at equal angles around z0 (a degree-one vertex).
std::vector<SampledCurve> default_base_arcs(const PlanarAction& action, const Point& z0);

/// Developed boundary of the fundamental polygon: edge k is the prefix
/// x_1...x_{k-1} applied to the arc of letter x_k. Throws VertexNotImmersed,
/// DegenerateEdge, CuspCorner.
DevelopedBoundary develop_boundary(const PlanarAction& action, const std::vector<SampledCurve>& base_arcs,
                                   const Point& z0, double corner_radius = 0.1);

/// turning(delta) + 1 - 2g.
EulerReport euler_via_graphical(const PlanarAction& action, const std::vector<SampledCurve>& base_arcs, const Point& z0);
EulerReport euler_via_graphical(const PlanarAction& action, const Point& z0);

// --- genus one, proper orbit ------------------------------------------------

struct SignedSumOptions {
  double splice_radius = 0.0;  // 0: a fifth of |beta(p) - p|
  std::uint64_t seed = 1;      // perturbation bumps on degenerate contacts
  int max_retries = 5;
  int properness_horizon = 5000;
  bool allow_non_proper = false;  // report a windowed, non-certified sum instead of failing
};

/// a_i = X . beta^i(tau) - tau . beta^i(tau), X the splice of alpha(tau) for |i| = 1
/// and alpha(tau) otherwise. Generators a1 = alpha, b1 = beta; p = tau(0).
CoefficientTable coefficients_a(const PlanarAction& action, const SampledCurve& tau, int N,
                                const SignedSumOptions& options = {});

EulerReport euler_via_signed_sum(const PlanarAction& action, const SampledCurve& tau, int N,
                                 const SignedSumOptions& options = {});

EulerReport euler_via_writhe_difference(const PlanarAction& action, const SampledCurve& tau);

/// clamp(i, -(2n+1), 2n+1)
int covering_weight(int n, int i);

struct CoveringTrickReport {
  int n = 0;
  int euler = 0;           // signed sum of the a_i
  int weighted_sum = 0;    // sum_i X_n(i) a_i
  int convolution_signed_sum = 0;
  std::map<int, int> direct;       // A_j from T and B = beta^(2n+1), j in {-2,-1,1,2}
  std::map<int, int> convolution;  // sum_{|d|<=2n} (2n+1-|d|) a_{j(2n+1)+d}
  bool passed = false;
};

/// Computes both sides of every identity; `passed` records the outcome.
CoveringTrickReport covering_trick_report(const PlanarAction& action, const SampledCurve& tau, int n, int N,
                                          const SignedSumOptions& options = {});
/// As covering_trick_report, throwing IdentityViolated if any identity fails.
CoveringTrickReport covering_trick_check(const PlanarAction& action, const SampledCurve& tau, int n, int N,
                                         const SignedSumOptions& options = {});

/// The arc beta^-n(tau) ... beta^n(tau) from beta^-n(p) to beta^(n+1)(p).
SampledCurve orbit_block(const MapExpr& beta, const SampledCurve& tau, int n);

/// tau(t) + amplitude * bump(t) * direction, a C^1 perturbation fixing both
/// endpoints and tangents. The bump shape is drawn from `seed`.
SampledCurve perturb_arc(const SampledCurve& tau, double amplitude, std::uint64_t seed);

// --- free actions -------------------------------------------------------------

enum class Properness { ProperLike, Returns, Inconclusive };

std::string_view to_string(Properness p);

struct ProperProbe {
  Properness verdict = Properness::Inconclusive;
  double min_distance = 0.0;  // over pairs of index distance > 1
  int i = 0;                  // closest pair
  int j = 0;
  double forward_radius = 0.0;
  double backward_radius = 0.0;
};

ProperProbe orbit_properness_probe(const MapExpr& beta, const Point& p, int horizon);

/// tau runs from p to alpha(p); true iff tau meets alpha(tau) only at alpha(p).
/// Throws FixedPointSuspected if alpha nearly fixes a probe point near the arcs.
bool is_free_arc(const MapExpr& alpha, const SampledCurve& tau);

struct CanonicalWrithe {
  int value = 0;  // w / 2
  int w = 0;
  CoefficientTable b;
};

/// b_i = delta . alpha^i(delta), w = sum_{i>0} b_i - sum_{i<0} b_i; returns w/2.
/// Throws OddParity, TailNotVanished, FixedPointSuspected.
CanonicalWrithe canonical_writhe(const MapExpr& alpha, const SampledCurve& delta, int N);

}  // namespace euler_plane
