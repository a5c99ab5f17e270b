#include "euler_plane/check.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "euler_plane/error.hpp"

namespace euler_plane::check {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

double g_worst_residue = 0.0;

void note_residues(const EulerReport& r) {
  for (const char* key : {"residue", "turning_residue"})
    if (const auto it = r.diagnostics.find(key); it != r.diagnostics.end())
      g_worst_residue = std::max(g_worst_residue, std::abs(it->second));
}

/// Runs body, turning a library error into a failed outcome.
Outcome guarded(const std::string& name, const std::function<void(Outcome&)>& body) {
  Outcome o{name, true, {}, 0.0};
  const auto t0 = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.passed = false;
    o.detail += (o.detail.empty() ? "" : "; ") + std::string(e.what());
  }
  o.seconds = seconds_since(t0);
  return o;
}

void fail(Outcome& o, const std::string& why) {
  o.passed = false;
  if (o.detail.size() < 400) o.detail += (o.detail.empty() ? "" : "; ") + why;
}

MapExpr bestvina_alpha(int k) {
  return lazy_twist_product(make_annulus_twist(Point::Zero(), 0.9, 1.1, k), make_dilation(2.0), IndexSet::All);
}

Vector unit_at(double angle) { return {std::cos(angle), std::sin(angle)}; }

}  // namespace

MapExpr random_word(std::mt19937_64& rng, int length) {
  std::uniform_int_distribution<int> kind(0, 7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<MapExpr> factors;
  for (int i = 0; i < length; ++i) {
    MapExpr f;
    switch (kind(rng)) {
      case 0: f = make_translation(Vector(u(rng), u(rng))); break;
      case 1: f = make_dilation(1.0 + 0.5 * u(rng), Point(u(rng), u(rng))); break;
      case 2: f = make_rotation(3.0 * u(rng), Point(u(rng), u(rng))); break;
      case 3: f = make_annulus_twist(Point(u(rng), u(rng)), 0.6, 1.4, (u(rng) > 0 ? 1 : -2)); break;
      case 4: f = make_step_translation(Vector(1.5 * u(rng) + 1.6, 0.7 * u(rng)), -0.5, 0.7); break;
      case 5: f = make_strip_shear(-1.0, 1.2, 2.0 * u(rng)); break;
      case 6: f = make_local_rotation(Point(u(rng), u(rng)), 0.3, 1.1, 2.5 * u(rng)); break;
      default: f = bestvina_alpha(u(rng) > 0 ? 1 : -1); break;
    }
    if (u(rng) > 0.6) f = inverse(f);
    factors.push_back(f);
  }
  return compose(factors);
}

Jacobian finite_difference(const MapExpr& e, const Point& p, double h) {
  Jacobian j;
  for (int c = 0; c < 2; ++c) {
    Vector d = Vector::Zero();
    d[c] = h;
    j.col(c) = (eval(e, p + d) - eval(e, p - d)) / (2 * h);
  }
  return j;
}

SampledCurve random_arc(std::mt19937_64& rng, const Point& a, const Point& b, const Vector& t0, const Vector& t1) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Point via = 0.5 * (a + b) + Vector(u(rng), u(rng));
  const Vector vv = Vector(u(rng), u(rng)) + 0.8 * (b - a);
  const double s0 = 1.0 + 0.5 * u(rng);
  const double s1 = 1.0 + 0.5 * u(rng);
  return concatenate({hermite(a, s0 * t0, via, vv), hermite(via, vv, b, s1 * t1)}, false);
}

double worst_turning_residue() { return g_worst_residue; }
void reset_turning_residue() { g_worst_residue = 0.0; }

Outcome bestvina_lift(double limit_seconds) {
  return guarded("bestvina lift n=-3..3", [&](Outcome& o) {
    double slowest = 0.0;
    for (int n = -3; n <= 3; ++n) {
      const auto t0 = Clock::now();
      const zoo::Recipe r = zoo::bestvina(n);
      const EulerReport rep = euler_via_lift(r.action, *r.lift);
      const double s = seconds_since(t0);
      slowest = std::max(slowest, s);
      note_residues(rep);
      if (rep.value != n) fail(o, "n=" + std::to_string(n) + " gave " + std::to_string(rep.value));
      if (s > limit_seconds) fail(o, "n=" + std::to_string(n) + " took " + std::to_string(s) + " s");
    }
    o.detail = o.passed ? "slowest run " + std::to_string(slowest) + " s" : o.detail;
  });
}

Outcome genus2_lift_graphical(double limit_seconds) {
  return guarded("genus-2 lift = graphical = n, n=-2..2", [&](Outcome& o) {
    double slowest = 0.0;
    for (int n = -2; n <= 2; ++n) {
      const zoo::Recipe r = zoo::genus2_smooth(n);
      auto t0 = Clock::now();
      const EulerReport lift = euler_via_lift(r.action, *r.lift);
      const double s_lift = seconds_since(t0);
      t0 = Clock::now();
      const EulerReport graph = euler_via_graphical(r.action, r.graphical_basepoint);
      const double s_graph = seconds_since(t0);
      slowest = std::max({slowest, s_lift, s_graph});
      note_residues(lift);
      note_residues(graph);
      if (lift.value != n || graph.value != n)
        fail(o, "n=" + std::to_string(n) + ": lift " + std::to_string(lift.value) + ", graphical " +
                    std::to_string(graph.value));
      if (std::max(s_lift, s_graph) > limit_seconds) fail(o, "n=" + std::to_string(n) + " exceeded the time limit");
    }
    if (o.passed) o.detail = "slowest run " + std::to_string(slowest) + " s";
  });
}

Outcome vanishing_instances() {
  return guarded("torus_shear, commuting_rotation_twist, free_translations vanish", [](Outcome& o) {
    int ran = 0;
    for (const zoo::Recipe& r : {zoo::torus_shear(), zoo::commuting_rotation_twist(), zoo::free_translations()}) {
      for (Method m : {Method::Lift, Method::Graphical, Method::SignedSum, Method::WritheDifference}) {
        try {
          const EulerReport rep = zoo::run(r, m);
          note_residues(rep);
          ++ran;
          if (rep.value != 0)
            fail(o, r.name + " " + std::string(to_string(m)) + " gave " + std::to_string(rep.value));
        } catch (const Error& e) {
          // hypotheses of the method not met: not applicable
          if (e.code() != ErrorCode::NotApplicable && e.code() != ErrorCode::OrbitMaybeNonProper) throw;
        }
      }
      if (r.free_arc) {
        ++ran;
        const int w = canonical_writhe(r.action.a(1), *r.free_arc, 10).value;
        if (w != 0) fail(o, r.name + " canonical writhe " + std::to_string(w));
      }
    }
    if (o.passed) o.detail = std::to_string(ran) + " applicable method runs, all 0";
  });
}

Outcome coefficient_tail(int N) {
  return guarded("torus_shear a_i vanish beyond the diameter bound, N=" + std::to_string(N), [&](Outcome& o) {
    const zoo::Recipe r = zoo::torus_shear();
    const CoefficientTable t = coefficients_a(r.action, *r.tau, N);
    if (t.tail_bound >= N) fail(o, "bound " + std::to_string(t.tail_bound) + " not inside the window");
    for (int i = t.tail_bound + 1; i <= N; ++i)
      if (t.at(i) != 0 || t.at(-i) != 0) fail(o, "a_" + std::to_string(i) + " nonzero");
    if (o.passed) o.detail = "bound " + std::to_string(t.tail_bound) + ", support " + std::to_string(t.support());
  });
}

Outcome covering_identities(int random_tori) {
  return guarded("covering trick n=1,2,3 on torus_shear and " + std::to_string(random_tori) + " random tori",
                 [&](Outcome& o) {
                   std::vector<zoo::Recipe> recipes{zoo::torus_shear()};
                   for (int s = 1; s <= random_tori; ++s) recipes.push_back(zoo::random_torus(static_cast<std::uint64_t>(s)));
                   int nonzero = 0;
                   for (const zoo::Recipe& r : recipes)
                     for (int n = 1; n <= 3; ++n) {
                       const CoveringTrickReport c = covering_trick_report(r.action, *r.tau, n, 50);
                       for (const auto& [j, v] : c.direct) nonzero += v != 0;
                       if (!c.passed)
                         fail(o, r.name + " n=" + std::to_string(n) + ": weighted " + std::to_string(c.weighted_sum) +
                                     " vs " + std::to_string((2 * n + 1) * c.euler));
                     }
                   if (o.passed) o.detail = std::to_string(nonzero) + " nonzero A_j among the direct blocks";
                 });
}

Outcome writhe_calculus(int arcs) {
  return guarded("writhe_difference(add_twist(x,k), x) = k over " + std::to_string(arcs) + " arcs; additivity",
                 [&](Outcome& o) {
                   const Point a(0, 0), b(2, 0.5);
                   const double turn = 0.7;
                   const ArcSpace space{a, b, rotation_matrix(turn)};
                   std::mt19937_64 rng(6);
                   std::uniform_real_distribution<double> ang(-1.2, 1.2);
                   std::uniform_int_distribution<int> kk(-3, 3);
                   auto arc = [&] {
                     const double th = ang(rng);
                     return random_arc(rng, a, b, unit_at(th), unit_at(th + turn));
                   };
                   for (int i = 0; i < arcs; ++i) {
                     const SampledCurve x = arc();
                     for (int k = -3; k <= 3; ++k) {
                       const int d = writhe_difference(add_twist(x, k), x, space);
                       if (d != k) fail(o, "arc " + std::to_string(i) + " k=" + std::to_string(k) + " gave " + std::to_string(d));
                     }
                     const SampledCurve y = add_twist(arc(), kk(rng));
                     const SampledCurve z = add_twist(arc(), kk(rng));
                     const int xy = writhe_difference(x, y, space), yz = writhe_difference(y, z, space);
                     const int xz = writhe_difference(x, z, space);
                     if (xz != xy + yz) fail(o, "triple " + std::to_string(i) + " not additive");
                   }
                 });
}

Outcome canonical_writhe_values() {
  return guarded("canonical writhe on free_translations, k=-3..3", [](Outcome& o) {
    const zoo::Recipe r = zoo::free_translations();
    const MapExpr& alpha = r.action.a(1);
    const SampledCurve seg = *r.free_arc;
    const int base = canonical_writhe(alpha, seg, 10).value;
    if (base != 0) fail(o, "segment gave " + std::to_string(base));
    for (int k = -3; k <= 3; ++k) {
      const CanonicalWrithe w = canonical_writhe(alpha, add_twist(seg, k), 10);  // throws OddParity
      if (w.value != k) fail(o, "k=" + std::to_string(k) + " gave " + std::to_string(w.value));
    }
  });
}

Outcome homotopy_invariance(int perturbations) {
  return guarded("signed sum of torus_shear under " + std::to_string(perturbations) + " perturbations of tau",
                 [&](Outcome& o) {
                   const zoo::Recipe r = zoo::torus_shear();
                   const int base = euler_via_signed_sum(r.action, *r.tau, 50).value;
                   const Point p = r.tau->start();
                   const MapExpr& beta = r.action.b(1);
                   std::vector<Point> orbit;
                   for (int i = -3; i <= 3; ++i) orbit.push_back(eval(power(beta, i), p));
                   int used = 0;
                   for (std::uint64_t seed = 1; used < perturbations && seed < 10000; ++seed) {
                     const SampledCurve t = perturb_arc(*r.tau, 0.15, seed);
                     // the homotopy must not sweep across an orbit point
                     bool clear = true;
                     for (const CurveSample& s : t.samples())
                       for (std::size_t k = 0; k < orbit.size(); ++k)
                         if (k != 3 && k != 4 && (s.point - orbit[k]).norm() < 0.2) clear = false;
                     if (!clear) continue;
                     ++used;
                     const int v = euler_via_signed_sum(r.action, t, 50).value;
                     if (v != base) fail(o, "seed " + std::to_string(seed) + " gave " + std::to_string(v));
                   }
                   if (used < perturbations) fail(o, "only " + std::to_string(used) + " admissible perturbations");
                   if (o.passed) o.detail = "value " + std::to_string(base) + " throughout";
                 });
}

Outcome differential_kernels(int pairs) {
  return guarded("differential vs central differences on " + std::to_string(pairs) + " pairs; turning residues",
                 [&](Outcome& o) {
                   std::mt19937_64 rng(9);
                   std::uniform_int_distribution<int> len(1, 4);
                   std::uniform_real_distribution<double> u(-3.0, 3.0);
                   double worst = 0.0;
                   for (int i = 0; i < pairs; ++i) {
                     const MapExpr e = random_word(rng, len(rng));
                     const Point q(u(rng), u(rng));
                     const Jacobian fd = finite_difference(e, q);
                     const double err = (differential(e, q) - fd).norm() / std::max(1.0, fd.norm());
                     worst = std::max(worst, err);
                   }
                   if (worst >= 1e-5) fail(o, "relative error " + std::to_string(worst));
                   if (g_worst_residue >= 0.05) fail(o, "turning residue " + std::to_string(g_worst_residue));
                   char buf[96];
                   std::snprintf(buf, sizeof buf, "worst relative error %.2e, worst residue %.2e", worst, g_worst_residue);
                   if (o.passed) o.detail = buf;
                 });
}

Outcome hypotheses_not_overclaimed() {
  return guarded("results outside the hypotheses are not certified", [](Outcome& o) {
    const zoo::Recipe b = zoo::bestvina(1);
    if (euler_via_writhe_difference(b.action, *b.tau).certified) fail(o, "bestvina writhe-diff certified");
    SignedSumOptions windowed;
    windowed.allow_non_proper = true;
    if (euler_via_signed_sum(b.action, *b.tau, 6, windowed).certified) fail(o, "bestvina windowed sum certified");
    const zoo::Recipe c = zoo::commuting_rotation_twist();
    try {
      euler_via_signed_sum(c.action, *c.tau, 20);
      fail(o, "non-proper orbit accepted");
    } catch (const Error& e) {
      if (e.code() != ErrorCode::OrbitMaybeNonProper) throw;
    }
  });
}

std::vector<Property> property_suite() {
  return {
      {"bestvina", [] { return bestvina_lift(); }},
      {"genus2", [] { return genus2_lift_graphical(); }},
      {"vanishing", [] { return vanishing_instances(); }},
      {"tail", [] { return coefficient_tail(); }},
      {"covering", [] { return covering_identities(); }},
      {"writhe", [] { return writhe_calculus(); }},
      {"canonical", [] { return canonical_writhe_values(); }},
      {"homotopy", [] { return homotopy_invariance(); }},
      {"kernels", [] { return differential_kernels(); }},
      {"hypotheses", [] { return hypotheses_not_overclaimed(); }},
  };
}

bool run_suite(std::ostream& out) {
  reset_turning_residue();
  bool all = true;
  for (const Property& p : property_suite()) {
    const Outcome o = p.run();
    all = all && o.passed;
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.2f", o.seconds);
    out << (o.passed ? "PASS " : "FAIL ") << p.name << ": " << o.name << " (" << secs << " s)";
    if (!o.detail.empty()) out << " - " << o.detail;
    out << "\n" << std::flush;
  }
  return all;
}

}  // namespace euler_plane::check
