#pragma once

#include <complex>
#include <functional>

#include "pdmspec/expr.hpp"
#include "pdmspec/interval.hpp"
#include "pdmspec/maps.hpp"

namespace pdmspec::potentials {

using cplx = std::complex<double>;

enum class Var { q, x };

/// Complex potential V + iW, evaluable pointwise on `domain`.
class ComplexPotential {
 public:
  using Fn = std::function<cplx(double)>;

  /// Throws DomainError unless both parts are finite on a 256-point probe
  /// grid (infinite domains are probed inside |t| <= 100).
  ComplexPotential(Fn fn, Var var, Interval domain);

  cplx operator()(double t) const { return fn_(t); }
  double re(double t) const { return fn_(t).real(); }
  double im(double t) const { return fn_(t).imag(); }
  Var var() const { return var_; }
  const Interval& domain() const { return domain_; }

 private:
  Fn fn_;
  Var var_;
  Interval domain_;
};

/// Generating function F(q) with integration constant alpha0.
struct GeneratorSpec {
  expr::Expr F;
  double alpha0 = 0.0;
};

GeneratorSpec scarf2_generator(double V2);
GeneratorSpec periodic_generator();
GeneratorSpec morse_generator(double eta);

/// alpha0 - F(q)^2 - i F'(q), in q.
ComplexPotential reference_potential(const GeneratorSpec& gen,
                                     Interval q_domain = Interval::real_line());

/// Full PDM target potential in x:
///   -F^2 - mu mu''/2 - mu'^2/4 + alpha0 - i mu dF/dx,
/// with F evaluated at q(x) and mu dF/dx = F'(q) by the chain rule.
ComplexPotential target_potential(const GeneratorSpec& gen, const maps::MassProfile& p,
                                  const maps::CoordinateMap& map);

/// Reference potential pulled back to x, V_ref(q(x)). This is the
/// "effective potential in x" form that the closed-form isospectral
/// families below are written in; it omits the mass terms of
/// target_potential.
ComplexPotential composed_in_x(const ComplexPotential& ref, const maps::CoordinateMap& map);

/// F(q(x)) as a real function of x.
std::function<double(double)> generator_in_x(const GeneratorSpec& gen,
                                             const maps::CoordinateMap& map);

/// -V1 sech^2 q - i V2 sech q tanh q. Throws BadParams unless V1 > 0, V2 != 0.
ComplexPotential scarf2_potential(double V1, double V2,
                                  Interval q_domain = Interval::real_line());

/// -6 / (cos q + 2i sin q)^2 - 25/16 on (-pi, pi).
ComplexPotential periodic_potential();

/// The same potential in its expanded trigonometric form, for cross-checks.
ComplexPotential periodic_potential_trig();

/// -eta^2 e^{-2q} + i eta e^{-q}.
ComplexPotential morse_potential(double eta, Interval q_domain = Interval::real_line());

/// Scarf II isospectral family generated by q = branch * ln f(x):
///   -4 V2^2 f^2/(f^2+1)^2 - branch * 2i V2 f (f^2-1)/(f^2+1)^2.
ComplexPotential scarf2_isospectral_f(double V2, const expr::Expr& f, Interval domain,
                                      int branch = +1);

/// Periodic-type isospectral family generated by q = arctan g(x):
///   -6 (g^2+1)/(1+2ig)^2 - 25/16.
ComplexPotential periodic_isospectral_g(const expr::Expr& g, Interval domain);

/// Same real part, imaginary part negated. Negative control for checks
/// that depend on W = -mu F'.
ComplexPotential conjugated(const ComplexPotential& pot);

/// min(Re V(a), Re V(b)): the potential's floor at the box walls.
double boundary_floor(const ComplexPotential& pot, double a, double b);

}  // namespace pdmspec::potentials
