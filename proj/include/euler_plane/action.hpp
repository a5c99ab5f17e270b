#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "euler_plane/planemap.hpp"

namespace euler_plane {

/// One letter of a word in the surface group generators.
struct Letter {
  int generator;  // index into PlanarAction::generators
  bool inverse = false;

  bool operator==(const Letter&) const = default;
};

using Word = std::vector<Letter>;

/// A surface-group presentation a1,b1,...,ag,bg with a plane map per generator.
struct PlanarAction {
  int genus = 1;
  std::vector<std::string> names;    // "a1", "b1", "a2", ...
  std::vector<MapExpr> generators;   // same order as names
  std::vector<Point> non_smooth_loci;
  std::optional<Point> fixed_point;  // distinguished fixed point of a1

  static PlanarAction surface(int genus, std::vector<MapExpr> generators);

  const MapExpr& a(int i) const { return generators[2 * (i - 1)]; }
  const MapExpr& b(int i) const { return generators[2 * (i - 1) + 1]; }
  int generator_index(const std::string& name) const;
};

/// [a1,b1][a2,b2]...[ag,bg] with [a,b] = a b a^-1 b^-1.
Word surface_relator(int genus);

/// Word as a single expression (letters composed left to right, applied right to left).
MapExpr word_expr(const PlanarAction& action, const Word& word);
Point apply_word(const PlanarAction& action, const Word& word, const Point& p);
Word inverse_word(const Word& word);
std::string to_string(const PlanarAction& action, const Word& word);

struct RelatorReport {
  double max_displacement = 0.0;
  Point worst_point = Point::Zero();
  std::size_t samples = 0;
  bool passed = false;
};

RelatorReport relator_check(const PlanarAction& action, const std::vector<Point>& samples, double tol);

/// Seeded sample set: points with radius log-uniform in [r_min, r_max] and
/// uniform angle, kept at least `clearance` away from the action's non-smooth loci.
std::vector<Point> standard_samples(const PlanarAction& action, std::size_t count, std::uint64_t seed,
                                    double r_min = 0.1, double r_max = 50.0);

}  // namespace euler_plane
