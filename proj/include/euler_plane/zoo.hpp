#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "euler_plane/euler.hpp"

namespace euler_plane::zoo {

/// A named action together with everything the methods need to run on it.
struct Recipe {
  std::string name;
  std::map<std::string, double> parameters;
  PlanarAction action;
  std::optional<int> expected;          // where the value is known in advance
  std::optional<SampledCurve> tau;      // from the fixed point p of a1 to b1(p)
  std::optional<SampledCurve> free_arc; // from p to a1(p), for free actions
  std::optional<LiftContext> lift;
  Point graphical_basepoint = Point::Zero();
};

inline constexpr double kGoldenAngle = 2.399963229728653;  // pi (3 - sqrt 5)

Recipe bestvina(int n, double r_in = 0.9, double r_out = 1.1, double lambda = 2.0);
Recipe genus2_smooth(int n);
Recipe torus_shear(double amplitude = 0.4);
Recipe commuting_rotation_twist(double theta = kGoldenAngle, int k = 1);
Recipe free_translations(const Vector& v1 = Vector(1, 0), const Vector& v2 = Vector(0, 1));
Recipe trivial();
/// a_i, b_i -> identity for i >= 2.
Recipe pullback_degree_one(const Recipe& base, int genus);
/// A shear/translation torus conjugated by a compactly supported map that
/// stays away from the orbit of p, with a random graph for tau.
Recipe random_torus(std::uint64_t seed);

struct CatalogEntry {
  std::string name;
  std::map<std::string, double> defaults;
  std::string summary;
};

std::vector<CatalogEntry> catalog();

/// Recipe by name; missing parameters take their defaults. Throws
/// UnknownPrimitive for an unknown name and BadParameter for unknown or
/// malformed parameters.
Recipe make(const std::string& name, const std::map<std::string, double>& parameters = {});

struct RunOptions {
  int N = 50;
  SignedSumOptions signed_sum;
};

/// Runs one method on the recipe. Throws NotApplicable when the recipe lacks
/// what the method needs.
EulerReport run(const Recipe& recipe, Method method, const RunOptions& options = {});

}  // namespace euler_plane::zoo
