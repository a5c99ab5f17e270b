#include "euler_plane/planemap.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "euler_plane/error.hpp"

namespace euler_plane {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool finite(const Point& p) { return std::isfinite(p.x()) && std::isfinite(p.y()); }

std::string describe(const Point& p) {
  std::ostringstream os;
  os << "(" << p.x() << ", " << p.y() << ")";
  return os.str();
}

// Radial twists share one kernel: angle(r) about a centre, radius preserved.
struct RadialProfile {
  Point center;
  double r_in;
  double r_out;
  double angle_inside;
  double angle_outside;

  double angle(double r) const {
    const double u = (r - r_in) / (r_out - r_in);
    return angle_inside + (angle_outside - angle_inside) * profile::smoothstep(u);
  }
  double angle_slope(double r) const {
    const double w = r_out - r_in;
    return (angle_outside - angle_inside) * profile::smoothstep_derivative((r - r_in) / w) / w;
  }
};

template <bool WithJac>
Jet apply_radial(const RadialProfile& prof, const Point& p, bool inv) {
  const Vector d = p - prof.center;
  const double r = d.norm();
  // whole turns reduce to an exact identity outside the support
  const double phi = std::remainder(prof.angle(r), kTwoPi);
  const Jacobian rot = rotation_matrix(inv ? -phi : phi);
  Jet out{prof.center + rot * d, Jacobian::Identity()};
  if constexpr (WithJac) {
    auto forward_jac = [&](const Vector& dd, double rr) -> Jacobian {
      const double ph = std::remainder(prof.angle(rr), kTwoPi);
      if (rr == 0.0) return rotation_matrix(ph);
      const double slope = prof.angle_slope(rr);
      return rotation_matrix(ph) * (Jacobian::Identity() + perp(dd) * (slope / rr) * dd.transpose());
    };
    if (!inv) {
      out.jacobian = forward_jac(d, r);
    } else {
      // the preimage sits on the same circle
      const Vector pre = out.value - prof.center;
      out.jacobian = forward_jac(pre, r).inverse();
    }
  }
  return out;
}

double step_inverse_x(const StepTranslation& s, double x_target) {
  const double w = s.x_hi - s.x_lo;
  if (s.shift.x() == 0.0) return x_target;
  const double shifted = x_target - s.shift.x();
  if (shifted >= s.x_hi) return shifted;
  if (x_target <= s.x_lo) return x_target;
  auto f = [&](double x) { return x + s.shift.x() * profile::smoothstep((x - s.x_lo) / w); };
  double lo = s.x_lo;
  double hi = s.x_hi;
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double fx = f(x) - x_target;
    if (fx == 0.0) break;
    if (fx > 0.0) hi = x; else lo = x;
    const double df = 1.0 + s.shift.x() * profile::smoothstep_derivative((x - s.x_lo) / w) / w;
    double next = x - fx / df;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-16 * (1.0 + std::abs(x))) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

template <bool WithJac>
Jet apply_primitive(const PrimitiveMap& prim, const Point& p, bool inv) {
  return std::visit(
      overloaded{
          [&](const Translation& t) -> Jet {
            return {inv ? Point(p - t.shift) : Point(p + t.shift), Jacobian::Identity()};
          },
          [&](const Dilation& d) -> Jet {
            const double f = inv ? 1.0 / d.factor : d.factor;
            return {d.center + f * (p - d.center), f * Jacobian::Identity()};
          },
          [&](const Rotation& r) -> Jet {
            const Jacobian m = rotation_matrix(inv ? -r.angle : r.angle);
            return {r.center + m * (p - r.center), m};
          },
          [&](const AnnulusTwist& t) -> Jet {
            const RadialProfile prof{t.center, t.r_in, t.r_out, 0.0, kTwoPi * t.power};
            return apply_radial<WithJac>(prof, p, inv);
          },
          [&](const LocalRotation& t) -> Jet {
            const RadialProfile prof{t.center, t.r_in, t.r_out, t.angle, 0.0};
            return apply_radial<WithJac>(prof, p, inv);
          },
          [&](const StepTranslation& s) -> Jet {
            const double w = s.x_hi - s.x_lo;
            const double x = inv ? step_inverse_x(s, p.x()) : p.x();
            const double u = (x - s.x_lo) / w;
            const double sv = profile::smoothstep(u);
            Jet out;
            if (!inv) {
              out.value = p + s.shift * sv;
            } else {
              out.value = Point(x, p.y() - s.shift.y() * sv);
            }
            if constexpr (WithJac) {
              Jacobian j = Jacobian::Identity();
              const double ds = profile::smoothstep_derivative(u) / w;
              j(0, 0) += s.shift.x() * ds;
              j(1, 0) += s.shift.y() * ds;
              out.jacobian = inv ? Jacobian(j.inverse()) : j;
            }
            return out;
          },
          [&](const StripShear& s) -> Jet {
            const double h = s.y_hi - s.y_lo;
            const double u = (p.y() - s.y_lo) / h;
            const double sign = inv ? -1.0 : 1.0;
            Jet out{Point(p.x() + sign * s.amplitude * profile::odd_bump(u), p.y()), Jacobian::Identity()};
            if constexpr (WithJac) out.jacobian(0, 1) = sign * s.amplitude * profile::odd_bump_derivative(u) / h;
            return out;
          },
      },
      prim);
}

template <bool WithJac>
Jet apply(const MapExpr& e, const Point& p, bool inv);

template <bool WithJac>
Jet apply_node(const detail::Node& node, const Point& p, bool inv) {
  return std::visit(
      overloaded{
          [&](const PrimitiveMap& prim) -> Jet { return apply_primitive<WithJac>(prim, p, inv); },
          [&](const detail::Compose& c) -> Jet {
            Jet acc{p, Jacobian::Identity()};
            const auto step = [&](const MapExpr& f) {
              const Jet j = apply<WithJac>(f, acc.value, inv);
              acc.value = j.value;
              if constexpr (WithJac) acc.jacobian = j.jacobian * acc.jacobian;
            };
            if (!inv) {
              for (auto it = c.factors.rbegin(); it != c.factors.rend(); ++it) step(*it);
            } else {
              for (const auto& f : c.factors) step(f);
            }
            return acc;
          },
          [&](const detail::Inverse& i) -> Jet { return apply<WithJac>(i.child, p, !inv); },
          [&](const detail::Power& pw) -> Jet {
            const bool dir = inv != (pw.exponent < 0);
            Jet acc{p, Jacobian::Identity()};
            for (int k = 0; k < std::abs(pw.exponent); ++k) {
              const Jet j = apply<WithJac>(pw.child, acc.value, dir);
              acc.value = j.value;
              if constexpr (WithJac) acc.jacobian = j.jacobian * acc.jacobian;
            }
            return acc;
          },
          [&](const detail::ConjProduct& cp) -> Jet {
            if constexpr (WithJac) {
              if (cp.locator.kind == detail::SupportLocator::Kind::Radial && cp.indices == IndexSet::All &&
                  p == cp.locator.core.center) {
                throw Error(ErrorCode::NotDifferentiableHere,
                            "two-sided product is only continuous at its centre " + describe(p));
              }
            }
            Jet acc{p, Jacobian::Identity()};
            for (int n : cp.locator.candidates(p, cp.indices)) {
              if (!cp.locator.contains(n, acc.value)) continue;
              const MapExpr factor = compose({power(cp.conjugator, n), cp.core, power(cp.conjugator, -n)});
              const Jet j = apply<WithJac>(factor, acc.value, inv);
              acc.value = j.value;
              if constexpr (WithJac) acc.jacobian = j.jacobian * acc.jacobian;
            }
            return acc;
          },
      },
      node.content);
}

template <bool WithJac>
Jet apply(const MapExpr& e, const Point& p, bool inv) {
  if (e.is_identity()) return {p, Jacobian::Identity()};
  return apply_node<WithJac>(*e.node(), p, inv);
}

MapExpr make_node(detail::Node node) { return MapExpr(std::make_shared<const detail::Node>(std::move(node))); }

const PrimitiveMap* as_primitive(const MapExpr& e) {
  if (e.is_identity()) return nullptr;
  return std::get_if<PrimitiveMap>(&e.node()->content);
}

}  // namespace

// ---------------------------------------------------------------------------

double profile::smoothstep_max_slope() {
  static const double value = smoothstep_derivative(0.5);
  return value;
}

PrimitiveMap make_translation(const Vector& shift) { return Translation{shift}; }

PrimitiveMap make_dilation(double factor, const Point& center) {
  if (!(factor > 0.0) || !std::isfinite(factor))
    throw Error(ErrorCode::BadParameter, "dilation factor must be positive");
  return Dilation{factor, center};
}

PrimitiveMap make_rotation(double angle, const Point& center) { return Rotation{angle, center}; }

PrimitiveMap make_annulus_twist(const Point& center, double r_in, double r_out, int power) {
  if (!(r_in > 0.0) || !(r_in < r_out))
    throw Error(ErrorCode::BadRadii, "annulus twist needs 0 < r_in < r_out");
  return AnnulusTwist{center, r_in, r_out, power};
}

PrimitiveMap make_local_rotation(const Point& center, double r_in, double r_out, double angle) {
  if (!(r_in > 0.0) || !(r_in < r_out))
    throw Error(ErrorCode::BadRadii, "local rotation needs 0 < r_in < r_out");
  return LocalRotation{center, r_in, r_out, angle};
}

PrimitiveMap make_step_translation(const Vector& shift, double x_lo, double x_hi) {
  if (!(x_lo < x_hi)) throw Error(ErrorCode::BadParameter, "step translation needs x_lo < x_hi");
  if (shift.x() < 0.0 && -shift.x() * profile::smoothstep_max_slope() / (x_hi - x_lo) >= 1.0)
    throw Error(ErrorCode::NotInjective, "leftward shift too large for the transition band");
  return StepTranslation{shift, x_lo, x_hi};
}

PrimitiveMap make_strip_shear(double y_lo, double y_hi, double amplitude) {
  if (!(y_lo < y_hi)) throw Error(ErrorCode::BadParameter, "strip shear needs y_lo < y_hi");
  return StripShear{y_lo, y_hi, amplitude};
}

MapExpr::MapExpr(PrimitiveMap primitive)
    : node_(std::make_shared<const detail::Node>(detail::Node{std::move(primitive)})) {}

MapExpr compose(std::vector<MapExpr> factors) {
  std::erase_if(factors, [](const MapExpr& f) { return f.is_identity(); });
  if (factors.empty()) return {};
  if (factors.size() == 1) return factors.front();
  return make_node({detail::Compose{std::move(factors)}});
}

MapExpr inverse(const MapExpr& e) {
  if (e.is_identity()) return {};
  if (const auto* inv = std::get_if<detail::Inverse>(&e.node()->content)) return inv->child;
  return make_node({detail::Inverse{e}});
}

MapExpr power(const MapExpr& e, int exponent) {
  if (e.is_identity() || exponent == 0) return {};
  if (exponent == 1) return e;
  if (exponent == -1) return inverse(e);
  return make_node({detail::Power{e, exponent}});
}

MapExpr commutator(const MapExpr& a, const MapExpr& b) { return compose({a, b, inverse(a), inverse(b)}); }

std::optional<Annulus> annulus_support(const MapExpr& e) {
  if (e.is_identity()) return std::nullopt;
  return std::visit(
      overloaded{
          [](const PrimitiveMap& prim) -> std::optional<Annulus> {
            if (const auto* t = std::get_if<AnnulusTwist>(&prim)) return Annulus{t->center, t->r_in, t->r_out};
            if (const auto* t = std::get_if<LocalRotation>(&prim)) return Annulus{t->center, 0.0, t->r_out};
            return std::nullopt;
          },
          [](const detail::Compose& c) -> std::optional<Annulus> {
            std::optional<Annulus> hull;
            for (const auto& f : c.factors) {
              auto s = annulus_support(f);
              if (!s) return std::nullopt;
              if (!hull) {
                hull = s;
              } else {
                if ((hull->center - s->center).norm() > 1e-12) return std::nullopt;
                hull->r_in = std::min(hull->r_in, s->r_in);
                hull->r_out = std::max(hull->r_out, s->r_out);
              }
            }
            return hull;
          },
          [](const detail::Inverse& i) { return annulus_support(i.child); },
          [](const detail::Power& p) { return annulus_support(p.child); },
          [](const detail::ConjProduct&) -> std::optional<Annulus> { return std::nullopt; },
      },
      e.node()->content);
}

bool detail::SupportLocator::contains(int n, const Point& p) const {
  if (kind == Kind::Radial) {
    const double scale = std::pow(factor, n);
    const double r = (p - core.center).norm();
    const double lo = scale * core.r_in;
    const double hi = scale * core.r_out;
    return r >= std::min(lo, hi) && r <= std::max(lo, hi);
  }
  const double r = (p - (core.center + n * step)).norm();
  return r >= core.r_in && r <= core.r_out;
}

std::vector<int> detail::SupportLocator::candidates(const Point& p, IndexSet indices) const {
  if (!finite(p)) throw Error(ErrorCode::SupportUnresolvable, "non-finite point " + describe(p));
  long center_index = 0;
  if (kind == Kind::Radial) {
    const double r = (p - core.center).norm();
    if (r == 0.0) return {};
    const double ref = core.r_in > 0.0 ? core.r_in : core.r_out;
    const double idx = std::floor(std::log(r / ref) / std::log(factor));
    if (!std::isfinite(idx) || std::abs(idx) > 2000.0)
      throw Error(ErrorCode::SupportUnresolvable, "cannot bound the active conjugate at " + describe(p));
    center_index = static_cast<long>(idx);
  } else {
    const double idx = std::round((p - core.center).dot(step) / step.squaredNorm());
    if (!std::isfinite(idx) || std::abs(idx) > 1e9)
      throw Error(ErrorCode::SupportUnresolvable, "cannot bound the active conjugate at " + describe(p));
    center_index = static_cast<long>(idx);
  }
  std::vector<int> out;
  for (long n = center_index - 1; n <= center_index + 1; ++n) {
    if (indices == IndexSet::NonNegative && n < 0) continue;
    if (contains(static_cast<int>(n), p)) out.push_back(static_cast<int>(n));
  }
  return out;
}

MapExpr lazy_twist_product(const MapExpr& core, const MapExpr& conjugator, IndexSet indices) {
  const auto support = annulus_support(core);
  if (!support) {
    if (core.is_identity()) {
      // identity core: the product is the identity
      return {};
    }
    throw Error(ErrorCode::SupportUnresolvable, "product core must be supported in an annulus");
  }
  const PrimitiveMap* conj = as_primitive(conjugator);
  if (conj == nullptr) throw Error(ErrorCode::SupportUnresolvable, "product conjugator must be a primitive");

  detail::SupportLocator locator{detail::SupportLocator::Kind::Radial, *support};
  if (const auto* d = std::get_if<Dilation>(conj)) {
    if ((d->center - support->center).norm() > 1e-12)
      throw Error(ErrorCode::SupportUnresolvable, "dilation must be centred on the core annulus");
    if (support->r_in <= 0.0) throw Error(ErrorCode::OverlappingSupports, "core support must avoid the centre");
    const double lambda = d->factor >= 1.0 ? d->factor : 1.0 / d->factor;
    if (!(support->r_out / support->r_in < lambda))
      throw Error(ErrorCode::OverlappingSupports, "r_out/r_in must be below the dilation factor");
    locator.factor = d->factor;
  } else if (const auto* t = std::get_if<Translation>(conj)) {
    if (!(t->shift.norm() > 2.0 * support->r_out))
      throw Error(ErrorCode::OverlappingSupports, "translation shorter than the support diameter");
    locator.kind = detail::SupportLocator::Kind::Translational;
    locator.step = t->shift;
  } else if (const auto* s = std::get_if<StepTranslation>(conj)) {
    if (indices != IndexSet::NonNegative)
      throw Error(ErrorCode::SupportUnresolvable, "step translation products need nonnegative indices");
    if (!(support->center.x() - support->r_out > s->x_hi) || s->shift.x() < 0.0)
      throw Error(ErrorCode::SupportUnresolvable, "core must sit where the step acts as a translation");
    if (!(s->shift.norm() > 2.0 * support->r_out))
      throw Error(ErrorCode::OverlappingSupports, "shift shorter than the support diameter");
    locator.kind = detail::SupportLocator::Kind::Translational;
    locator.step = s->shift;
  } else {
    throw Error(ErrorCode::SupportUnresolvable, "unsupported conjugator kind");
  }
  return make_node({detail::ConjProduct{core, conjugator, indices, locator}});
}

MapExpr product_factor(const MapExpr& product, int n) {
  if (product.is_identity()) return {};
  const auto* cp = std::get_if<detail::ConjProduct>(&product.node()->content);
  if (cp == nullptr) throw Error(ErrorCode::InvalidArgument, "not a lazy product");
  return compose({power(cp->conjugator, n), cp->core, power(cp->conjugator, -n)});
}

std::vector<int> active_indices(const MapExpr& product, const Point& p) {
  if (product.is_identity()) return {};
  const auto* cp = std::get_if<detail::ConjProduct>(&product.node()->content);
  if (cp == nullptr) throw Error(ErrorCode::InvalidArgument, "not a lazy product");
  return cp->locator.candidates(p, cp->indices);
}

Point eval(const MapExpr& e, const Point& p) {
  if (!finite(p)) throw Error(ErrorCode::InvalidArgument, "non-finite point " + describe(p));
  return apply<false>(e, p, false).value;
}

Jet eval_jet(const MapExpr& e, const Point& p) {
  if (!finite(p)) throw Error(ErrorCode::InvalidArgument, "non-finite point " + describe(p));
  return apply<true>(e, p, false);
}

Jacobian differential(const MapExpr& e, const Point& p) { return eval_jet(e, p).jacobian; }

std::vector<Point> non_smooth_loci(const MapExpr& e) {
  std::vector<Point> out;
  if (e.is_identity()) return out;
  std::visit(overloaded{
                 [](const PrimitiveMap&) {},
                 [&](const detail::Compose& c) {
                   for (const auto& f : c.factors) {
                     auto sub = non_smooth_loci(f);
                     out.insert(out.end(), sub.begin(), sub.end());
                   }
                 },
                 [&](const detail::Inverse& i) { out = non_smooth_loci(i.child); },
                 [&](const detail::Power& p) { out = non_smooth_loci(p.child); },
                 [&](const detail::ConjProduct& cp) {
                   if (cp.locator.kind == detail::SupportLocator::Kind::Radial && cp.indices == IndexSet::All)
                     out.push_back(cp.locator.core.center);
                 },
             },
             e.node()->content);
  return out;
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SupportUnresolvable: return "SupportUnresolvable";
    case ErrorCode::NotDifferentiableHere: return "NotDifferentiableHere";
    case ErrorCode::BadRadii: return "BadRadii";
    case ErrorCode::NotInjective: return "NotInjective";
    case ErrorCode::OverlappingSupports: return "OverlappingSupports";
    case ErrorCode::ResidueTooLarge: return "ResidueTooLarge";
    case ErrorCode::NonTransverseContact: return "NonTransverseContact";
    case ErrorCode::CuspCorner: return "CuspCorner";
    case ErrorCode::NoFreeDisk: return "NoFreeDisk";
    case ErrorCode::AntipodalTangents: return "AntipodalTangents";
    case ErrorCode::ReturnPathCrossesEndpointBall: return "ReturnPathCrossesEndpointBall";
    case ErrorCode::WritheChanged: return "WritheChanged";
    case ErrorCode::SamplingFailed: return "SamplingFailed";
    case ErrorCode::PathHitsCenter: return "PathHitsCenter";
    case ErrorCode::ForbiddenRegionViolated: return "ForbiddenRegionViolated";
    case ErrorCode::NotARelator: return "NotARelator";
    case ErrorCode::DegenerateEdge: return "DegenerateEdge";
    case ErrorCode::VertexNotImmersed: return "VertexNotImmersed";
    case ErrorCode::TailNotVanished: return "TailNotVanished";
    case ErrorCode::OrbitMaybeNonProper: return "OrbitMaybeNonProper";
    case ErrorCode::IdentityViolated: return "IdentityViolated";
    case ErrorCode::FixedPointSuspected: return "FixedPointSuspected";
    case ErrorCode::OddParity: return "OddParity";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownPrimitive: return "UnknownPrimitive";
    case ErrorCode::UndeclaredGenerator: return "UndeclaredGenerator";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace euler_plane
