#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "euler_plane/planemap.hpp"

namespace euler_plane::cli {

struct SvgCurve {
  std::vector<Point> points;
  std::string css_class;  // tau, image, orbit, boundary
  bool arrow = true;
};

struct SvgCrossing {
  Point location;
  int sign;
};

/// Everything one figure may show. Empty members are simply not drawn.
struct SvgFigure {
  std::vector<SvgCurve> curves;
  std::vector<Annulus> annuli;  // shaded supports
  std::vector<SvgCrossing> crossings;
  std::vector<std::pair<int, int>> bars;  // (i, a_i)
  std::optional<int> xn;                  // draw the graph of X_n
  int xn_range = 0;                       // |i| range of that graph (0: 3(2n+1))

  bool empty() const { return curves.empty() && annuli.empty() && crossings.empty() && bars.empty() && !xn; }
};

/// (i, X_n(i)) for |i| <= range.
std::vector<std::pair<int, int>> xn_graph(int n, int range);

/// Deterministic SVG text: fixed layout, coordinates printed with 3 decimals.
std::string render_svg(const SvgFigure& figure);

/// Writes through a temporary file and a rename. Throws IoError.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace euler_plane::cli
