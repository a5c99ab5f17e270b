#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "euler_plane/error.hpp"
#include "euler_plane/zoo.hpp"

namespace euler_plane::cli {

struct Position {
  int line = 0;
  int column = 0;
};

/// A parse failure with the 1-based line and column it was detected at.
class SceneError : public Error {
 public:
  SceneError(ErrorCode code, Position at, const std::string& message);
  Position position() const { return at_; }

 private:
  Position at_;
};

/// Word over primitive names: `b^2 * t * b^-2`, `(a * b)'`, `id`.
struct WordExpr {
  enum class Kind { Atom, Product, Power, Inverse };
  Kind kind = Kind::Atom;
  std::string name;               // Atom ("id" is the identity)
  std::vector<WordExpr> children;  // Product: factors; Power, Inverse: one child
  int exponent = 1;
  Position at;  // not part of equality

  bool operator==(const WordExpr& o) const {
    return kind == o.kind && name == o.name && children == o.children && exponent == o.exponent;
  }
};

/// Argument value: a number or a bare identifier (primitive names, `all`).
using ArgValue = std::variant<double, std::string>;

struct PrimitiveDef {
  std::string name;
  std::string kind;  // translation, dilation, rotation, twist, local_rotation, step, shear, product
  std::map<std::string, ArgValue> args;
  Position at;

  bool operator==(const PrimitiveDef& o) const { return name == o.name && kind == o.kind && args == o.args; }
};

struct RecipeRef {
  std::string name;
  std::map<std::string, double> parameters;
  Position at;

  bool operator==(const RecipeRef& o) const { return name == o.name && parameters == o.parameters; }
};

struct MethodBlock {
  std::optional<std::string> name;  // lift, graphical, signed-sum, writhe-diff, all
  std::optional<int> N;             // signed-sum window
  std::optional<int> n;             // covering-trick order (0: skip)
  std::optional<double> R;          // lift radius at infinity for custom actions
  std::optional<Point> basepoint;   // graphical basepoint override
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;  // relator check
  std::optional<double> splice_radius;
  std::optional<bool> allow_non_proper;

  bool operator==(const MethodBlock&) const = default;
};

struct OutputBlock {
  std::optional<std::string> report;
  std::optional<std::string> svg;

  bool operator==(const OutputBlock&) const = default;
};

struct SceneFile {
  int version = 1;
  std::optional<int> genus;
  std::optional<RecipeRef> recipe;
  std::vector<PrimitiveDef> primitives;                      // declaration order
  std::vector<std::pair<std::string, WordExpr>> generators;  // a1, b1, a2, ...
  MethodBlock method;
  OutputBlock output;

  bool operator==(const SceneFile& o) const {
    return version == o.version && genus == o.genus && recipe == o.recipe && primitives == o.primitives &&
           generators == o.generators && method == o.method && output == o.output;
  }
};

/// Throws SceneError with code SyntaxError, UnknownPrimitive, UndeclaredGenerator or BadParameter.
SceneFile parse_scene(const std::string& text);
/// Canonical text; parse_scene(print_scene(s)) == s.
std::string print_scene(const SceneFile& scene);

WordExpr parse_word(const std::string& text);
std::string print_word(const WordExpr& w);

/// The action a scene describes: a zoo recipe or the custom generators.
zoo::Recipe build_recipe(const SceneFile& scene);

}  // namespace euler_plane::cli
