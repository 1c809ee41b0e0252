#pragma once

#include <optional>
#include <vector>

#include "pdmspec/dual.hpp"
#include "pdmspec/expr.hpp"
#include "pdmspec/interval.hpp"

namespace pdmspec::maps {

/// Dimensionless mass m(x) (units hbar = 2 m0 = 1) on an open interval,
/// with mu(x) = m(x)^(-1/2) and its first two derivatives.
class MassProfile {
 public:
  MassProfile(expr::Expr m, Interval domain) : m_(std::move(m)), domain_(domain) {}

  const expr::Expr& m_expr() const { return m_; }
  const Interval& domain() const { return domain_; }

  double mass(double x) const { return expr::eval(m_, x); }
  /// sqrt(M(x)) = 1/mu(x), evaluated from m directly so that it stays
  /// finite where mu diverges.
  double sqrt_mass(double x) const;
  double mu(double x) const { return mu_d2(x).v; }
  /// (mu, mu', mu'') at x.
  Dual2 mu_d2(double x) const;

 private:
  expr::Expr m_;
  Interval domain_;
};

/// Monotone change of variable q(x) with q'(x) = sqrt(M(x)) = 1/mu(x), kept
/// as a dense table plus either a closed form or cumulative quadrature.
class CoordinateMap {
 public:
  CoordinateMap(MassProfile profile, std::optional<expr::Expr> closed_form,
                double anchor_x);

  const Interval& source() const { return profile_.domain(); }
  const Interval& target() const { return target_; }
  const std::vector<double>& table_x() const { return xs_; }
  const std::vector<double>& table_q() const { return qs_; }
  const MassProfile& profile() const { return profile_; }
  bool has_closed_form() const { return closed_.has_value(); }
  /// Interpolation order of the table lookup (cubic Hermite).
  static constexpr int interpolation_order = 3;

  double q(double x) const;
  /// Inverse map; throws OutOfRange outside the open target interval.
  double x(double q) const;

 private:
  double q_raw(double x) const;
  double end_value(bool upper) const;

  MassProfile profile_;
  std::optional<expr::Expr> closed_;
  double anchor_x_ = 0.0;
  std::vector<double> xs_;
  std::vector<double> qs_;
  Interval target_;
};

/// Validates m > 0 and finite AD derivatives of mu on a construction grid.
MassProfile mass_from_expr(const expr::Expr& m, Interval domain);

struct MassAndMap {
  MassProfile profile;
  CoordinateMap map;
};

/// M = (d/dx ln f)^2 with q(x) = branch * ln f(x); branch is +1 or -1.
MassAndMap mass_from_f(const expr::Expr& f, Interval domain, int branch = +1);

/// M = (g' / (1 + g^2))^2 with q(x) = arctan g(x).
MassAndMap mass_from_g(const expr::Expr& g, Interval domain);

/// Map for a raw mass profile, anchored so that q(anchor) = 0.
CoordinateMap map_from_mass(const MassProfile& p, double anchor = 0.0);

/// Integral of sqrt(M) from x0 to x by adaptive Simpson (absolute tolerance
/// `tol`, recursion depth at most 40). Throws QuadratureFailure.
double q_of_x(const MassProfile& p, double x0, double x, double tol = 1e-10);

double x_of_q(const CoordinateMap& map, double q);

}  // namespace pdmspec::maps
