#pragma once

#include <cmath>

namespace pdmspec {

/// Second-order forward-mode dual number: value, first and second
/// derivative with respect to a single seed variable.
struct Dual2 {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;

  static constexpr Dual2 constant(double c) { return {c, 0.0, 0.0}; }
  static constexpr Dual2 seed(double x) { return {x, 1.0, 0.0}; }

  bool finite() const {
    return std::isfinite(v) && std::isfinite(d1) && std::isfinite(d2);
  }

  friend constexpr bool operator==(const Dual2&, const Dual2&) = default;
};

/// Applies a scalar function through the chain rule given g(u), g'(u), g''(u).
constexpr Dual2 chain(const Dual2& u, double g0, double g1, double g2) {
  return {g0, g1 * u.d1, g2 * u.d1 * u.d1 + g1 * u.d2};
}

constexpr Dual2 operator-(const Dual2& a) { return {-a.v, -a.d1, -a.d2}; }

constexpr Dual2 operator+(const Dual2& a, const Dual2& b) {
  return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2};
}

constexpr Dual2 operator-(const Dual2& a, const Dual2& b) {
  return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2};
}

constexpr Dual2 operator*(const Dual2& a, const Dual2& b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1,
          a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}

constexpr Dual2 operator/(const Dual2& a, const Dual2& b) {
  const double q = a.v / b.v;
  const double q1 = (a.d1 - q * b.d1) / b.v;
  const double q2 = (a.d2 - 2.0 * q1 * b.d1 - q * b.d2) / b.v;
  return {q, q1, q2};
}

constexpr Dual2 operator*(double c, const Dual2& a) {
  return {c * a.v, c * a.d1, c * a.d2};
}

constexpr Dual2 operator+(double c, const Dual2& a) {
  return {c + a.v, a.d1, a.d2};
}

/// u^c for a constant exponent. Terms whose coefficient vanishes are skipped
/// so that integer powers stay finite at u = 0.
inline Dual2 pow(const Dual2& u, double c) {
  if (c == 0.0) return Dual2::constant(1.0);
  const double p0 = std::pow(u.v, c);
  const double p1 = c * std::pow(u.v, c - 1.0);
  const double p2 = (c == 1.0) ? 0.0 : c * (c - 1.0) * std::pow(u.v, c - 2.0);
  return {p0, p1 * u.d1, p2 * u.d1 * u.d1 + p1 * u.d2};
}

inline Dual2 exp(const Dual2& u) {
  const double e = std::exp(u.v);
  return chain(u, e, e, e);
}

inline Dual2 log(const Dual2& u) {
  return chain(u, std::log(u.v), 1.0 / u.v, -1.0 / (u.v * u.v));
}

inline Dual2 sin(const Dual2& u) {
  const double s = std::sin(u.v), c = std::cos(u.v);
  return chain(u, s, c, -s);
}

inline Dual2 cos(const Dual2& u) {
  const double s = std::sin(u.v), c = std::cos(u.v);
  return chain(u, c, -s, -c);
}

inline Dual2 tan(const Dual2& u) {
  const double t = std::tan(u.v);
  const double sec2 = 1.0 + t * t;
  return chain(u, t, sec2, 2.0 * t * sec2);
}

inline Dual2 sinh(const Dual2& u) {
  const double s = std::sinh(u.v), c = std::cosh(u.v);
  return chain(u, s, c, s);
}

inline Dual2 cosh(const Dual2& u) {
  const double s = std::sinh(u.v), c = std::cosh(u.v);
  return chain(u, c, s, c);
}

inline Dual2 tanh(const Dual2& u) {
  const double t = std::tanh(u.v);
  const double s2 = 1.0 - t * t;
  return chain(u, t, s2, -2.0 * t * s2);
}

inline Dual2 sech(const Dual2& u) {
  const double s = 1.0 / std::cosh(u.v);
  const double t = std::tanh(u.v);
  return chain(u, s, -s * t, s * t * t - s * s * s);
}

inline Dual2 atan(const Dual2& u) {
  const double w = 1.0 / (1.0 + u.v * u.v);
  return chain(u, std::atan(u.v), w, -2.0 * u.v * w * w);
}

inline Dual2 sqrt(const Dual2& u) {
  const double r = std::sqrt(u.v);
  return chain(u, r, 0.5 / r, -0.25 / (r * r * r));
}

/// |u| with the subgradient convention sign(0) = 0.
inline Dual2 abs(const Dual2& u) {
  const double s = (u.v > 0.0) ? 1.0 : (u.v < 0.0 ? -1.0 : 0.0);
  return {std::abs(u.v), s * u.d1, s * u.d2};
}

}  // namespace pdmspec
