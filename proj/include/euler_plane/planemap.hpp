#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "euler_plane/profile.hpp"

namespace euler_plane {

// ---------------------------------------------------------------------------
// Primitive orientation-preserving diffeomorphisms of the plane.
// ---------------------------------------------------------------------------

struct Translation {
  Vector shift;
};

struct Dilation {
  double factor;  // > 0
  Point center;
};

struct Rotation {
  double angle;
  Point center;
};

/// (r, theta) -> (r, theta + 2*pi*power*s((r - r_in)/(r_out - r_in))) about `center`.
/// Identity inside r_in and (as a rotation by a whole number of turns) outside r_out.
struct AnnulusTwist {
  Point center;
  double r_in;
  double r_out;
  int power;
};

/// Rotation by `angle` inside r_in, fading to the identity at r_out.
struct LocalRotation {
  Point center;
  double r_in;
  double r_out;
  double angle;
};

/// (x, y) -> (x, y) + shift * s((x - x_lo)/(x_hi - x_lo)).
struct StepTranslation {
  Vector shift;
  double x_lo;
  double x_hi;
};

/// (x, y) -> (x + amplitude * b((y - y_lo)/(y_hi - y_lo)), y) with b the odd bump.
/// Commutes with every horizontal translation; fixes the band's centre line pointwise.
struct StripShear {
  double y_lo;
  double y_hi;
  double amplitude;
};

using PrimitiveMap =
    std::variant<Translation, Dilation, Rotation, AnnulusTwist, LocalRotation, StepTranslation, StripShear>;

PrimitiveMap make_translation(const Vector& shift);
PrimitiveMap make_dilation(double factor, const Point& center = Point::Zero());
PrimitiveMap make_rotation(double angle, const Point& center = Point::Zero());
/// Throws BadRadii unless 0 < r_in < r_out.
PrimitiveMap make_annulus_twist(const Point& center, double r_in, double r_out, int power);
PrimitiveMap make_local_rotation(const Point& center, double r_in, double r_out, double angle);
/// Throws NotInjective when a leftward shift outruns the band.
PrimitiveMap make_step_translation(const Vector& shift, double x_lo, double x_hi);
PrimitiveMap make_strip_shear(double y_lo, double y_hi, double amplitude);

// ---------------------------------------------------------------------------
// Expression trees.
// ---------------------------------------------------------------------------

enum class IndexSet { All, NonNegative };

namespace detail {
struct Node;
}

/// Immutable, shareable expression for a plane homeomorphism. A default
/// constructed MapExpr is the identity.
class MapExpr {
 public:
  MapExpr() = default;
  MapExpr(PrimitiveMap primitive);  // NOLINT(google-explicit-constructor)
  explicit MapExpr(std::shared_ptr<const detail::Node> node) : node_(std::move(node)) {}

  bool is_identity() const { return node_ == nullptr; }
  const detail::Node* node() const { return node_.get(); }

 private:
  std::shared_ptr<const detail::Node> node_;
};

/// factors[0] o factors[1] o ... (the last factor is applied first).
MapExpr compose(std::vector<MapExpr> factors);
MapExpr inverse(const MapExpr& e);
MapExpr power(const MapExpr& e, int exponent);

inline MapExpr operator*(const MapExpr& a, const MapExpr& b) { return compose({a, b}); }

/// a o b o a^-1 o b^-1
MapExpr commutator(const MapExpr& a, const MapExpr& b);

/// Product over n in `indices` of conjugator^n o core o conjugator^-n.
/// The core must be supported in an annulus (twist-like). Supported conjugators:
/// a Dilation about the annulus centre, a Translation, or (nonnegative indices
/// only) a StepTranslation whose translating half-plane contains the core.
/// Throws OverlappingSupports if conjugate supports meet, SupportUnresolvable if
/// the geometry is not one of the supported kinds.
MapExpr lazy_twist_product(const MapExpr& core, const MapExpr& conjugator, IndexSet indices);

/// The n-th factor conjugator^n o core o conjugator^-n of a lazy product.
MapExpr product_factor(const MapExpr& product, int n);

/// Indices whose factor acts nontrivially at p (at most one: supports are disjoint).
std::vector<int> active_indices(const MapExpr& product, const Point& p);

// ---------------------------------------------------------------------------
// Evaluation.
// ---------------------------------------------------------------------------

struct Jet {
  Point value;
  Jacobian jacobian;
};

Point eval(const MapExpr& e, const Point& p);
/// Throws NotDifferentiableHere at a declared non-smooth locus.
Jacobian differential(const MapExpr& e, const Point& p);
Jet eval_jet(const MapExpr& e, const Point& p);

/// Points where the expression is only C^0 (centres of two-sided dilation products).
std::vector<Point> non_smooth_loci(const MapExpr& e);

/// Closed annulus containing the support of e, when e is twist-like.
struct Annulus {
  Point center;
  double r_in;
  double r_out;
};
std::optional<Annulus> annulus_support(const MapExpr& e);

namespace detail {

struct Compose {
  std::vector<MapExpr> factors;
};

struct Inverse {
  MapExpr child;
};

struct Power {
  MapExpr child;
  int exponent;
};

struct SupportLocator {
  enum class Kind { Radial, Translational };
  Kind kind;
  Annulus core;
  double factor = 1.0;     // Radial
  Vector step = Vector::Zero();  // Translational

  bool contains(int n, const Point& p) const;
  std::vector<int> candidates(const Point& p, IndexSet indices) const;
};

struct ConjProduct {
  MapExpr core;
  MapExpr conjugator;
  IndexSet indices;
  SupportLocator locator;
};

struct Node {
  std::variant<PrimitiveMap, Compose, Inverse, Power, ConjProduct> content;
};

}  // namespace detail

}  // namespace euler_plane
