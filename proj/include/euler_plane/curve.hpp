#pragma once

#include <functional>
#include <vector>

#include "euler_plane/planemap.hpp"

namespace euler_plane {

struct PointVel {
  Point point;
  Vector velocity;
};

/// t in [0,1] -> (point, velocity). Must be C^1 with nonvanishing velocity.
using Parametrization = std::function<PointVel(double)>;

struct SamplingOptions {
  double max_turn = 0.08;    // radians between consecutive unit tangents
  double max_chord = 0.05;
  int initial_grid = 256;
  int max_depth = 40;
  std::size_t max_samples = 4'000'000;
};

struct CurveSample {
  double t;
  Point point;
  Vector tangent;  // unit
};

/// An oriented C^1 arc or loop: an exact parametrization plus adaptive samples.
/// Immutable; copies share the parametrization.
class SampledCurve {
 public:
  SampledCurve() = default;

  /// Adaptive sampling of f. Throws SamplingFailed if the contract cannot be met.
  static SampledCurve sample(Parametrization f, bool closed, const SamplingOptions& options = {});

  const std::vector<CurveSample>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  bool closed() const { return closed_; }
  bool empty() const { return samples_.empty(); }
  const Parametrization& parametrization() const { return f_; }
  const SamplingOptions& options() const { return options_; }

  PointVel at(double t) const { return f_(t); }
  Point start() const { return samples_.front().point; }
  Point end() const { return samples_.back().point; }
  Vector start_tangent() const { return samples_.front().tangent; }
  Vector end_tangent() const { return samples_.back().tangent; }

  /// Largest tangent-angle step between consecutive samples.
  double max_turn() const;
  double length() const;

  SampledCurve reversed() const;
  /// Sub-arc on [t0, t1], reparametrized over [0, 1].
  SampledCurve restricted(double t0, double t1) const;

 private:
  SampledCurve(Parametrization f, std::vector<CurveSample> samples, bool closed, SamplingOptions options)
      : f_(std::move(f)), samples_(std::move(samples)), closed_(closed), options_(options) {}

  friend SampledCurve concatenate(const std::vector<SampledCurve>& pieces, bool closed);

  Parametrization f_;
  std::vector<CurveSample> samples_;
  bool closed_ = false;
  SamplingOptions options_;
};

// --- construction -------------------------------------------------------------

SampledCurve segment(const Point& a, const Point& b);
SampledCurve circle(const Point& center, double radius, bool counterclockwise = true);
/// Cubic Hermite arc with endpoint velocities v0, v1.
SampledCurve hermite(const Point& p0, const Vector& v0, const Point& p1, const Vector& v1,
                     const SamplingOptions& options = {});
Parametrization hermite_parametrization(const Point& p0, const Vector& v0, const Point& p1, const Vector& v1);

/// Joins pieces end to start (points must agree to 1e-7). Samples are reused, not recomputed.
SampledCurve concatenate(const std::vector<SampledCurve>& pieces, bool closed);

/// Image curve: points by eval, tangents by the differential. Resampled.
SampledCurve push_forward(const MapExpr& expr, const SampledCurve& c);
SampledCurve push_forward(const MapExpr& expr, const SampledCurve& c, const SamplingOptions& options);

// --- invariants ---------------------------------------------------------------

/// Total continuous change of the tangent angle, in radians.
double total_rotation(const SampledCurve& c);
/// Whitney index of a closed curve. Throws ResidueTooLarge if the total is not near 2*pi*k.
int turning_number(const SampledCurve& c);
/// Winding number of a closed curve about q.
int winding_number(const SampledCurve& c, const Point& q);

struct CrossingEvent {
  double t;  // parameter on the first curve
  double u;  // parameter on the second curve
  Point location;
  int sign;  // sign of det(tangent A, tangent B)
};

struct IntersectionResult {
  int count = 0;
  std::vector<CrossingEvent> events;  // sorted by (t, u)
};

/// Signed transverse interior crossings. Contacts at shared endpoints are excluded.
/// Throws NonTransverseContact when a crossing is too close to tangential.
IntersectionResult signed_intersections(const SampledCurve& a, const SampledCurve& b);

/// Number of crossings between non-adjacent segments of c.
std::size_t self_crossings(const SampledCurve& c);
inline bool is_embedded(const SampledCurve& c) { return self_crossings(c) == 0; }

// --- corners, twists and writhe ---------------------------------------------

/// Closed C^1 loop from arcs meeting end to start (the last arc ends at the
/// first's start). Each corner is replaced inside a ball of `radius` by a blend
/// turning through the minimal exterior angle. Throws CuspCorner, DegenerateEdge.
SampledCurve smooth_corners(const std::vector<SampledCurve>& arcs, double radius);

/// Arcs from a to b whose terminal tangent is the transport of the initial one.
struct ArcSpace {
  Point a;
  Point b;
  Jacobian transport;
};

/// Throws InvalidArgument unless x lies in the space (to 1e-6).
void check_membership(const SampledCurve& x, const ArcSpace& space);

/// Largest radius rho (by halving from 0.25 |b - a|) such that x meets the
/// closed rho-ball about its end (at_end) or start as a single run of strictly
/// monotone distance. Throws NoFreeDisk.
double free_disk_radius(const SampledCurve& x, bool at_end);

/// x with k positive full twists inserted in a free disk about its end point.
SampledCurve add_twist(const SampledCurve& x, int k);

/// [x] - [y] in the affine space of the arc space; `routing` selects the return path.
int writhe_difference(const SampledCurve& x, const SampledCurve& y, const ArcSpace& space, int routing = 0);

/// Arc equal to `templ` within radius/2 of both endpoints and to a outside
/// radius, with [a] - [result] = 0 verified. Throws WritheChanged.
SampledCurve splice_near_endpoints(const SampledCurve& a, const SampledCurve& templ, double radius);

}  // namespace euler_plane
