#pragma once

#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "euler_plane/zoo.hpp"

namespace euler_plane::check {

struct Outcome {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

// --- generators shared with the tests ----------------------------------------

/// Word of `length` random smooth primitives (and Bestvina products), some inverted.
MapExpr random_word(std::mt19937_64& rng, int length);
/// Central differences with step h.
Jacobian finite_difference(const MapExpr& e, const Point& p, double h = 1e-6);
/// Two-piece Hermite arc a -> b with end tangents t0, t1 (up to positive scale).
SampledCurve random_arc(std::mt19937_64& rng, const Point& a, const Point& b, const Vector& t0, const Vector& t1);

// --- the numbered properties ----------------------------------------------------

Outcome bestvina_lift(double limit_seconds = 5.0);
Outcome genus2_lift_graphical(double limit_seconds = 30.0);
Outcome vanishing_instances();
Outcome coefficient_tail(int N = 50);
Outcome covering_identities(int random_tori = 5);
Outcome writhe_calculus(int arcs = 100);
Outcome canonical_writhe_values();
Outcome homotopy_invariance(int perturbations = 50);
Outcome differential_kernels(int pairs = 1000);
Outcome hypotheses_not_overclaimed();

/// Residues seen by every turning-number computation since the last reset.
double worst_turning_residue();
void reset_turning_residue();

struct Property {
  std::string name;
  std::function<Outcome()> run;
};

/// The built-in suite behind `euler-plane check`.
std::vector<Property> property_suite();
/// Runs the suite, printing one PASS/FAIL line per property. True when all pass.
bool run_suite(std::ostream& out);

}  // namespace euler_plane::check
