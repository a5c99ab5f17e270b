#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "euler_plane/error.hpp"
#include "euler_plane/euler.hpp"
#include "parallel.hpp"

namespace euler_plane {

int CoefficientTable::support() const {
  for (int i = N; i > 0; --i)
    if (at(i) != 0 || at(-i) != 0) return i;
  return 0;
}

int CoefficientTable::signed_sum() const {
  int s = 0;
  for (int i = 1; i <= N; ++i) s += at(i) - at(-i);
  return s;
}

int covering_weight(int n, int i) { return std::clamp(i, -(2 * n + 1), 2 * n + 1); }

SampledCurve perturb_arc(const SampledCurve& tau, double amplitude, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int mode = std::uniform_int_distribution<int>(1, 3)(rng);
  const double phase = std::uniform_real_distribution<double>(0.0, kTwoPi)(rng);
  const double heading = std::uniform_real_distribution<double>(0.0, kTwoPi)(rng);
  const Vector dir(std::cos(heading), std::sin(heading));
  const Parametrization f = tau.parametrization();
  constexpr double pi = std::numbers::pi;
  return SampledCurve::sample(
      [=](double t) {
        // sin^2(pi t) kills the bump and its derivative at both ends
        const double s2 = std::sin(pi * t) * std::sin(pi * t);
        const double w = std::sin(2 * pi * mode * t + phase);
        const double b = s2 * w;
        const double db = pi * std::sin(2 * pi * t) * w + s2 * 2 * pi * mode * std::cos(2 * pi * mode * t + phase);
        const PointVel base = f(t);
        return PointVel{base.point + amplitude * b * dir, base.velocity + amplitude * db * dir};
      },
      false, tau.options());
}

SampledCurve orbit_block(const MapExpr& beta, const SampledCurve& tau, int n) {
  std::vector<SampledCurve> pieces;
  for (int k = -n; k <= n; ++k) pieces.push_back(k == 0 ? tau : push_forward(power(beta, k), tau));
  return concatenate(pieces, false);
}

namespace {

struct GenusOne {
  MapExpr alpha;
  MapExpr beta;
  Point p;
  ArcSpace space;
};

GenusOne genus_one(const PlanarAction& action, const SampledCurve& tau) {
  if (action.genus != 1) throw Error(ErrorCode::NotApplicable, "needs a genus-one action");
  GenusOne g{action.a(1), action.b(1), tau.start(), {}};
  if ((eval(g.alpha, g.p) - g.p).norm() > 1e-9)
    throw Error(ErrorCode::NotApplicable, "tau must start at a fixed point of alpha");
  const Jet j = eval_jet(g.beta, g.p);
  g.space = ArcSpace{g.p, j.value, j.jacobian};
  try {
    check_membership(tau, g.space);
  } catch (const Error& e) {
    throw Error(ErrorCode::NotApplicable, std::string("tau is not an arc from p to beta(p): ") + e.what());
  }
  return g;
}

double default_radius(const GenusOne& g, const SignedSumOptions& options) {
  return options.splice_radius > 0 ? options.splice_radius : 0.2 * (g.space.b - g.p).norm();
}

double reach(const SampledCurve& c, const Point& p) {
  double d = 0.0;
  for (const CurveSample& s : c.samples()) d = std::max(d, (s.point - p).norm());
  return d;
}

double closest(const SampledCurve& c, const Point& p) {
  double d = std::numeric_limits<double>::infinity();
  for (const CurveSample& s : c.samples()) d = std::min(d, (s.point - p).norm());
  return d;
}

CoefficientTable build_table(const GenusOne& g, const SampledCurve& tau, int N, double radius) {
  CoefficientTable t;
  t.N = N;
  t.values.assign(static_cast<std::size_t>(2 * N + 1), 0);
  t.spliced.assign(static_cast<std::size_t>(2 * N + 1), false);
  const SampledCurve image = push_forward(g.alpha, tau);
  const SampledCurve spliced = splice_near_endpoints(image, tau, radius);
  const double diameter = std::max(reach(image, g.p), reach(tau, g.p));
  struct Entry {
    IntersectionResult x, y;
    bool near;
  };
  // entries are independent; slot k holds index i = k - N
  const std::vector<Entry> entries = detail::parallel_map<Entry>(2 * N + 1, [&](int k) {
    const int i = k - N;
    if (i == 0) return Entry{};
    const SampledCurve shifted = push_forward(power(g.beta, i), tau);
    return Entry{signed_intersections(std::abs(i) == 1 ? spliced : image, shifted), signed_intersections(tau, shifted),
                 closest(shifted, g.p) <= diameter};
  });
  int last_near = 0;
  for (int i = -N; i <= N; ++i) {
    if (i == 0) continue;
    const auto slot = static_cast<std::size_t>(i + N);
    const Entry& e = entries[slot];
    t.values[slot] = e.x.count - e.y.count;
    t.spliced[slot] = std::abs(i) == 1;
    for (const CrossingEvent& c : e.x.events) t.crossings.push_back({i, true, c});
    for (const CrossingEvent& c : e.y.events) t.crossings.push_back({i, false, c});
    if (e.near) last_near = std::max(last_near, std::abs(i));
  }
  t.tail_bound = last_near + 1;
  for (int i = t.tail_bound + 1; i <= N; ++i)
    if (t.at(i) != 0 || t.at(-i) != 0)
      throw Error(ErrorCode::TailNotVanished, "a_" + std::to_string(i) + " is nonzero beyond the diameter bound");
  return t;
}

}  // namespace

CoefficientTable coefficients_a(const PlanarAction& action, const SampledCurve& tau, int N,
                                const SignedSumOptions& options) {
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "window N must be positive");
  const GenusOne g = genus_one(action, tau);
  const double radius = default_radius(g, options);
  for (int attempt = 0;; ++attempt) {
    try {
      const SampledCurve arc = attempt == 0 ? tau : perturb_arc(tau, 1e-4, options.seed + static_cast<std::uint64_t>(attempt));
      CoefficientTable t = build_table(g, arc, N, radius);
      t.perturbations = attempt;
      return t;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonTransverseContact || attempt >= options.max_retries) throw;
    }
  }
}

EulerReport euler_via_signed_sum(const PlanarAction& action, const SampledCurve& tau, int N,
                                 const SignedSumOptions& options) {
  EulerReport r;
  r.method = Method::SignedSum;
  const GenusOne g = genus_one(action, tau);
  if (!action.non_smooth_loci.empty()) {
    r.certified = false;
    r.notes.push_back("action is not C^1 everywhere");
  }
  const ProperProbe probe = orbit_properness_probe(g.beta, g.p, options.properness_horizon);
  r.diagnostics["orbit_min_distance"] = probe.min_distance;
  if (probe.verdict == Properness::Returns) {
    if (!options.allow_non_proper)
      throw Error(ErrorCode::OrbitMaybeNonProper, "orbit of p returns within " + std::to_string(probe.min_distance) +
                                                      " (indices " + std::to_string(probe.i) + ", " +
                                                      std::to_string(probe.j) + ")");
    r.certified = false;
    r.notes.push_back("orbit of p is not proper; windowed sum only");
  } else if (probe.verdict == Properness::Inconclusive) {
    r.notes.push_back("orbit properness inconclusive at horizon " + std::to_string(options.properness_horizon));
  }
  CoefficientTable t = coefficients_a(action, tau, N, options);
  if (t.tail_bound > N) {
    if (!options.allow_non_proper)
      throw Error(ErrorCode::TailNotVanished,
                  "diameter bound " + std::to_string(t.tail_bound) + " exceeds the window; increase N");
    r.certified = false;
    r.notes.push_back("diameter bound exceeds the window");
  }
  r.value = t.signed_sum();
  r.diagnostics["N"] = N;
  r.diagnostics["tail_bound"] = t.tail_bound;
  r.diagnostics["support"] = t.support();
  r.diagnostics["perturbations"] = t.perturbations;
  r.table = std::move(t);
  return r;
}

EulerReport euler_via_writhe_difference(const PlanarAction& action, const SampledCurve& tau) {
  const GenusOne g = genus_one(action, tau);
  const SampledCurve image = push_forward(g.alpha, tau);
  EulerReport r;
  r.method = Method::WritheDifference;
  if (!action.non_smooth_loci.empty()) {
    r.certified = false;
    r.notes.push_back("action is not C^1 everywhere; the writhe identity is not guaranteed");
  }
  try {
    r.value = writhe_difference(image, tau, g.space);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InvalidArgument) throw;
    throw Error(ErrorCode::NotApplicable, std::string("alpha(tau) leaves the arc space: ") + e.what());
  }
  return r;
}

CoveringTrickReport covering_trick_report(const PlanarAction& action, const SampledCurve& tau, int n, int N,
                                          const SignedSumOptions& options) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "n must be nonnegative");
  const int m = 2 * n + 1;
  N = std::max(N, 3 * m - 1);  // the j = +-2 convolutions reach index 6n+2
  const GenusOne g = genus_one(action, tau);
  const CoefficientTable t = coefficients_a(action, tau, N, options);

  CoveringTrickReport r;
  r.n = n;
  r.euler = t.signed_sum();
  for (int i = -N; i <= N; ++i) r.weighted_sum += covering_weight(n, i) * t.at(i);

  auto convolve = [&](int j) {
    int s = 0;
    for (int d = -2 * n; d <= 2 * n; ++d) s += (m - std::abs(d)) * t.at(j * m + d);
    return s;
  };
  for (int j = 1; j * m + 2 * n <= N; ++j) r.convolution_signed_sum += convolve(j) - convolve(-j);

  const SampledCurve block = orbit_block(g.beta, tau, n);
  const SampledCurve image = push_forward(g.alpha, block);
  const SampledCurve spliced = splice_near_endpoints(image, block, default_radius(g, options));
  const MapExpr big = power(g.beta, m);
  constexpr int kBlocks[] = {-2, -1, 1, 2};
  const std::vector<int> direct = detail::parallel_map<int>(4, [&](int k) {
    const int j = kBlocks[k];
    const SampledCurve shifted = push_forward(power(big, j), block);
    const SampledCurve& x = std::abs(j) == 1 ? spliced : image;
    return signed_intersections(x, shifted).count - signed_intersections(block, shifted).count;
  });
  for (int k = 0; k < 4; ++k) {
    r.direct[kBlocks[k]] = direct[static_cast<std::size_t>(k)];
    r.convolution[kBlocks[k]] = convolve(kBlocks[k]);
  }
  r.passed = r.weighted_sum == m * r.euler && r.convolution_signed_sum == r.weighted_sum && r.direct == r.convolution;
  return r;
}

CoveringTrickReport covering_trick_check(const PlanarAction& action, const SampledCurve& tau, int n, int N,
                                         const SignedSumOptions& options) {
  CoveringTrickReport r = covering_trick_report(action, tau, n, N, options);
  if (!r.passed) {
    std::string what = "n=" + std::to_string(n) + ": sum X_n(i) a_i = " + std::to_string(r.weighted_sum) +
                       ", (2n+1) e = " + std::to_string((2 * n + 1) * r.euler);
    for (const auto& [j, v] : r.direct)
      what += "; A_" + std::to_string(j) + " direct " + std::to_string(v) + " vs " + std::to_string(r.convolution[j]);
    throw Error(ErrorCode::IdentityViolated, what);
  }
  return r;
}

}  // namespace euler_plane
