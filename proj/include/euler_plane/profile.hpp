#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

namespace euler_plane {

using Point = Eigen::Vector2d;
using Vector = Eigen::Vector2d;
using Jacobian = Eigen::Matrix2d;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

namespace profile {

/// exp(-1/t) for t > 0, zero otherwise. Flat to all orders at 0.
template <typename Scalar>
Scalar flat(Scalar t) {
  return t > Scalar(0) ? std::exp(-Scalar(1) / t) : Scalar(0);
}

template <typename Scalar>
Scalar flat_derivative(Scalar t) {
  return t > Scalar(0) ? std::exp(-Scalar(1) / t) / (t * t) : Scalar(0);
}

/// C-infinity transition: 0 for t <= 0, 1 for t >= 1, s(1/2) = 1/2, s(1-t) = 1-s(t).
template <typename Scalar>
Scalar smoothstep(Scalar t) {
  if (t <= Scalar(0)) return Scalar(0);
  if (t >= Scalar(1)) return Scalar(1);
  const Scalar a = flat(t);
  const Scalar b = flat(Scalar(1) - t);
  return a / (a + b);
}

template <typename Scalar>
Scalar smoothstep_derivative(Scalar t) {
  if (t <= Scalar(0) || t >= Scalar(1)) return Scalar(0);
  const Scalar a = flat(t);
  const Scalar b = flat(Scalar(1) - t);
  const Scalar da = flat_derivative(t);
  const Scalar db = flat_derivative(Scalar(1) - t);
  const Scalar sum = a + b;
  return (da * b + a * db) / (sum * sum);
}

/// Supremum of smoothstep_derivative over [0,1], attained at t = 1/2.
double smoothstep_max_slope();

/// Odd C-infinity bump on [0,1]: (2u-1) * exp(1 - 1/(1-(2u-1)^2)), zero outside (0,1).
/// Vanishes at u = 1/2 and to all orders at the ends.
template <typename Scalar>
Scalar odd_bump(Scalar u) {
  const Scalar v = Scalar(2) * u - Scalar(1);
  const Scalar q = Scalar(1) - v * v;
  if (q <= Scalar(0)) return Scalar(0);
  return v * std::exp(Scalar(1) - Scalar(1) / q);
}

template <typename Scalar>
Scalar odd_bump_derivative(Scalar u) {
  const Scalar v = Scalar(2) * u - Scalar(1);
  const Scalar q = Scalar(1) - v * v;
  if (q <= Scalar(0)) return Scalar(0);
  const Scalar bump = std::exp(Scalar(1) - Scalar(1) / q);
  const Scalar dbump_dv = bump * (-Scalar(2) * v / (q * q));
  return Scalar(2) * (bump + v * dbump_dv);
}

}  // namespace profile

/// Signed angle from a to b in (-pi, pi].
template <typename Scalar>
Scalar signed_angle(const Eigen::Matrix<Scalar, 2, 1>& a, const Eigen::Matrix<Scalar, 2, 1>& b) {
  return std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
}

/// Wrap an angle into (-pi, pi].
template <typename Scalar>
Scalar wrap_angle(Scalar angle) {
  const Scalar pi = std::numbers::pi_v<Scalar>;
  Scalar w = std::remainder(angle, Scalar(2) * pi);
  if (w <= -pi) w += Scalar(2) * pi;
  return w;
}

template <typename Scalar>
Scalar cross(const Eigen::Matrix<Scalar, 2, 1>& a, const Eigen::Matrix<Scalar, 2, 1>& b) {
  return a.x() * b.y() - a.y() * b.x();
}

/// Rotation matrix by `angle` (counterclockwise).
inline Jacobian rotation_matrix(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Jacobian r;
  r << c, -s, s, c;
  return r;
}

inline Vector perp(const Vector& v) { return Vector(-v.y(), v.x()); }

}  // namespace euler_plane
