#include "euler_plane/action.hpp"

#include <cmath>
#include <random>

#include "euler_plane/error.hpp"

namespace euler_plane {

PlanarAction PlanarAction::surface(int genus, std::vector<MapExpr> generators) {
  if (genus < 1) throw Error(ErrorCode::BadParameter, "genus must be at least 1");
  if (generators.size() != static_cast<std::size_t>(2 * genus))
    throw Error(ErrorCode::BadParameter, "a genus-g action needs 2g generators");
  PlanarAction action;
  action.genus = genus;
  for (int i = 1; i <= genus; ++i) {
    action.names.push_back("a" + std::to_string(i));
    action.names.push_back("b" + std::to_string(i));
  }
  action.generators = std::move(generators);
  for (const auto& g : action.generators) {
    for (const auto& p : euler_plane::non_smooth_loci(g)) action.non_smooth_loci.push_back(p);
  }
  return action;
}

int PlanarAction::generator_index(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  return -1;
}

Word surface_relator(int genus) {
  Word w;
  for (int i = 0; i < genus; ++i) {
    const int a = 2 * i;
    const int b = 2 * i + 1;
    w.push_back({a, false});
    w.push_back({b, false});
    w.push_back({a, true});
    w.push_back({b, true});
  }
  return w;
}

MapExpr word_expr(const PlanarAction& action, const Word& word) {
  std::vector<MapExpr> factors;
  factors.reserve(word.size());
  for (const auto& l : word) {
    const MapExpr& g = action.generators.at(static_cast<std::size_t>(l.generator));
    factors.push_back(l.inverse ? inverse(g) : g);
  }
  return compose(std::move(factors));
}

Point apply_word(const PlanarAction& action, const Word& word, const Point& p) {
  return eval(word_expr(action, word), p);
}

Word inverse_word(const Word& word) {
  Word out(word.rbegin(), word.rend());
  for (auto& l : out) l.inverse = !l.inverse;
  return out;
}

std::string to_string(const PlanarAction& action, const Word& word) {
  std::string s;
  for (const auto& l : word) {
    if (!s.empty()) s += ' ';
    s += action.names.at(static_cast<std::size_t>(l.generator));
    if (l.inverse) s += '\'';
  }
  return s;
}

RelatorReport relator_check(const PlanarAction& action, const std::vector<Point>& samples, double tol) {
  const MapExpr relator = word_expr(action, surface_relator(action.genus));
  RelatorReport report;
  for (const auto& p : samples) {
    const double d = (eval(relator, p) - p).norm();
    if (report.samples == 0 || d > report.max_displacement) {
      report.max_displacement = d;
      report.worst_point = p;
    }
    ++report.samples;
  }
  report.passed = report.max_displacement < tol;
  return report;
}

std::vector<Point> standard_samples(const PlanarAction& action, std::size_t count, std::uint64_t seed, double r_min,
                                    double r_max) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_r(std::log(r_min), std::log(r_max));
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::vector<Point> out;
  out.reserve(count);
  while (out.size() < count) {
    const double r = std::exp(log_r(rng));
    const double a = angle(rng);
    const Point p(r * std::cos(a), r * std::sin(a));
    bool clear = true;
    for (const auto& q : action.non_smooth_loci) clear = clear && (p - q).norm() > 1e-6;
    if (clear) out.push_back(p);
  }
  return out;
}

}  // namespace euler_plane
