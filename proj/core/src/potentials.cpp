#include "pdmspec/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pdmspec/error.hpp"

namespace pdmspec::potentials {

namespace {

constexpr int kProbePoints = 256;
constexpr double kProbeWindow = 100.0;
constexpr cplx kI{0.0, 1.0};

double sech(double q) { return 1.0 / std::cosh(q); }

}  // namespace

ComplexPotential::ComplexPotential(Fn fn, Var var, Interval domain)
    : fn_(std::move(fn)), var_(var), domain_(domain) {
  const double window = domain_.finite() ? 0.0 : kProbeWindow;
  for (double t : interior_samples(domain_, kProbePoints, window)) {
    const cplx v = fn_(t);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      std::ostringstream msg;
      msg << "potential is not finite at " << (var_ == Var::q ? "q" : "x") << " = " << t;
      throw DomainError(msg.str());
    }
  }
}

GeneratorSpec scarf2_generator(double V2) {
  using namespace expr;
  return {literal(-V2) * unary(Func::sech, variable()), 0.0};
}

GeneratorSpec periodic_generator() {
  return {expr::parse("-4/(3*cos(q)^2-4)-5/4", "q"), 0.0};
}

GeneratorSpec morse_generator(double eta) {
  using namespace expr;
  return {literal(eta) * unary(Func::exp, -variable()), 0.0};
}

ComplexPotential reference_potential(const GeneratorSpec& gen, Interval q_domain) {
  return ComplexPotential(
      [F = gen.F, a0 = gen.alpha0](double q) {
        const Dual2 f = expr::eval_d2(F, q);
        return cplx(a0 - f.v * f.v, -f.d1);
      },
      Var::q, q_domain);
}

ComplexPotential target_potential(const GeneratorSpec& gen, const maps::MassProfile& p,
                                  const maps::CoordinateMap& map) {
  return ComplexPotential(
      [F = gen.F, a0 = gen.alpha0, p, map](double x) {
        const Dual2 mu = p.mu_d2(x);
        const Dual2 f = expr::eval_d2(F, map.q(x));
        const double re = -f.v * f.v - 0.5 * mu.v * mu.d2 - 0.25 * mu.d1 * mu.d1 + a0;
        return cplx(re, -f.d1);
      },
      Var::x, map.source());
}

ComplexPotential composed_in_x(const ComplexPotential& ref, const maps::CoordinateMap& map) {
  if (ref.var() != Var::q) throw BadParams("composed_in_x expects a potential in q");
  return ComplexPotential([ref, map](double x) { return ref(map.q(x)); }, Var::x,
                          map.source());
}

std::function<double(double)> generator_in_x(const GeneratorSpec& gen,
                                             const maps::CoordinateMap& map) {
  return [F = gen.F, map](double x) { return expr::eval(F, map.q(x)); };
}

ComplexPotential scarf2_potential(double V1, double V2, Interval q_domain) {
  if (!(V1 > 0.0) || V2 == 0.0 || !std::isfinite(V1) || !std::isfinite(V2))
    throw BadParams("Scarf II requires V1 > 0 and V2 != 0");
  return ComplexPotential(
      [V1, V2](double q) {
        const double s = sech(q);
        return cplx(-V1 * s * s, -V2 * s * std::tanh(q));
      },
      Var::q, q_domain);
}

ComplexPotential periodic_potential() {
  return ComplexPotential(
      [](double q) {
        const cplx d = std::cos(q) + 2.0 * kI * std::sin(q);
        return -6.0 / (d * d) - 25.0 / 16.0;
      },
      Var::q, Interval{-std::numbers::pi, std::numbers::pi});
}

ComplexPotential periodic_potential_trig() {
  return ComplexPotential(
      [](double q) {
        const double c = std::cos(q);
        const double d = c * c - 4.0 / 3.0;
        const double re = (-30.0 * c * c + 24.0) / (9.0 * d * d) - 25.0 / 16.0;
        const double im = 4.0 * std::sin(2.0 * q) / (3.0 * d * d);
        return cplx(re, im);
      },
      Var::q, Interval{-std::numbers::pi, std::numbers::pi});
}

ComplexPotential morse_potential(double eta, Interval q_domain) {
  if (!std::isfinite(eta)) throw BadParams("Morse eta must be finite");
  return ComplexPotential(
      [eta](double q) {
        const double e = std::exp(-q);
        return cplx(-eta * eta * e * e, eta * e);
      },
      Var::q, q_domain);
}

ComplexPotential scarf2_isospectral_f(double V2, const expr::Expr& f, Interval domain,
                                      int branch) {
  if (branch != 1 && branch != -1) throw BadParams("branch must be +1 or -1");
  return ComplexPotential(
      [V2, f, branch](double x) {
        const double fx = expr::eval(f, x);
        const double f2 = fx * fx;
        const double den = (f2 + 1.0) * (f2 + 1.0);
        return cplx(-4.0 * V2 * V2 * f2 / den, -branch * 2.0 * V2 * fx * (f2 - 1.0) / den);
      },
      Var::x, domain);
}

ComplexPotential periodic_isospectral_g(const expr::Expr& g, Interval domain) {
  return ComplexPotential(
      [g](double x) {
        const double gx = expr::eval(g, x);
        const cplx d = 1.0 + 2.0 * kI * gx;
        return -6.0 * (gx * gx + 1.0) / (d * d) - 25.0 / 16.0;
      },
      Var::x, domain);
}

ComplexPotential conjugated(const ComplexPotential& pot) {
  return ComplexPotential([pot](double t) { return std::conj(pot(t)); }, pot.var(),
                          pot.domain());
}

double boundary_floor(const ComplexPotential& pot, double a, double b) {
  return std::min(pot.re(a), pot.re(b));
}

}  // namespace pdmspec::potentials
