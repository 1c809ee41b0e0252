#include "pdmspec/maps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pdmspec/error.hpp"

namespace pdmspec::maps {

namespace {

constexpr int kConstructionPoints = 512;
constexpr int kTableNodes = 2049;
constexpr int kMaxDepth = 40;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct SimpsonPanel {
  double a, b, fa, fm, fb, whole;
};

template <class F>
double adaptive_simpson(const F& f, const SimpsonPanel& p, double tol, int depth) {
  const double m = 0.5 * (p.a + p.b);
  const double lm = 0.5 * (p.a + m);
  const double rm = 0.5 * (m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
  const double right = (p.b - m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
  const double delta = left + right - p.whole;
  const double floor = 1e-15 * std::abs(left + right);
  if (std::abs(delta) <= std::max(15.0 * tol, floor)) return left + right + delta / 15.0;
  if (depth >= kMaxDepth) {
    std::ostringstream msg;
    msg << "adaptive Simpson exceeded depth " << kMaxDepth << " on [" << p.a
        << ", " << p.b << "]";
    throw QuadratureFailure(msg.str());
  }
  return adaptive_simpson(f, {p.a, m, p.fa, flm, p.fm, left}, 0.5 * tol, depth + 1) +
         adaptive_simpson(f, {m, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth + 1);
}

template <class F>
double integrate(const F& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  if (b < a) return -integrate(f, b, a, tol);
  // A few initial panels keep narrow features from being stepped over.
  constexpr int panels = 8;
  const double w = (b - a) / panels;
  double total = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + i * w;
    const double hi = (i + 1 == panels) ? b : lo + w;
    const double flo = f(lo), fhi = f(hi), fmid = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    total += adaptive_simpson(f, {lo, hi, flo, fmid, fhi, whole}, tol / panels, 0);
  }
  return total;
}

int strict_sign(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

/// Sign of the derivative of `g` on the construction grid; throws
/// NonMonotoneMap when it vanishes or changes.
int derivative_sign(const expr::Expr& g, const Interval& domain, const char* name) {
  int sign = 0;
  for (double x : interior_samples(domain, kConstructionPoints)) {
    const int s = strict_sign(expr::eval_d2(g, x).d1);
    if (s == 0 || (sign != 0 && s != sign)) {
      std::ostringstream msg;
      msg << name << "' vanishes or changes sign near x = " << x
          << "; the coordinate map is not monotone on the domain";
      throw NonMonotoneMap(msg.str());
    }
    sign = s;
  }
  return sign;
}

}  // namespace

double MassProfile::sqrt_mass(double x) const { return std::sqrt(mass(x)); }

Dual2 MassProfile::mu_d2(double x) const {
  const Dual2 mu = pow(expr::eval_d2(m_, x), -0.5);
  if (!mu.finite()) {
    std::ostringstream msg;
    msg << "mu = m^(-1/2) or its derivatives not finite at x = " << x;
    throw DomainError(msg.str());
  }
  return mu;
}

MassProfile mass_from_expr(const expr::Expr& m, Interval domain) {
  if (!(domain.lo < domain.hi)) throw BadParams("mass domain must satisfy lo < hi");
  MassProfile p(m, domain);
  for (double x : interior_samples(domain, kConstructionPoints)) {
    const double mx = p.mass(x);
    if (!(mx > 0.0)) {
      std::ostringstream msg;
      msg << "mass m(x) = " << mx << " is not positive at x = " << x;
      throw NonpositiveMass(msg.str());
    }
    (void)p.mu_d2(x);
  }
  return p;
}

CoordinateMap::CoordinateMap(MassProfile profile, std::optional<expr::Expr> closed_form,
                             double anchor_x)
    : profile_(std::move(profile)), closed_(std::move(closed_form)), anchor_x_(anchor_x) {
  const Interval& dom = profile_.domain();
  if (!closed_ && !dom.contains_closed(anchor_x_))
    throw BadParams("map anchor lies outside the mass domain");
  xs_ = interior_samples(dom, kTableNodes);
  qs_.resize(xs_.size());
  if (closed_) {
    for (std::size_t i = 0; i < xs_.size(); ++i) qs_[i] = expr::eval(*closed_, xs_[i]);
  } else {
    auto integrand = [this](double z) { return profile_.sqrt_mass(z); };
    // Node nearest to the anchor, then march outwards segment by segment.
    const auto it = std::lower_bound(xs_.begin(), xs_.end(), anchor_x_);
    std::size_t k = (it == xs_.end()) ? xs_.size() - 1 : static_cast<std::size_t>(it - xs_.begin());
    qs_[k] = integrate(integrand, anchor_x_, xs_[k], 1e-12);
    for (std::size_t i = k + 1; i < xs_.size(); ++i)
      qs_[i] = qs_[i - 1] + integrate(integrand, xs_[i - 1], xs_[i], 1e-13);
    for (std::size_t i = k; i-- > 0;)
      qs_[i] = qs_[i + 1] - integrate(integrand, xs_[i], xs_[i + 1], 1e-13);
  }
  for (std::size_t i = 1; i < qs_.size(); ++i) {
    if (!(qs_[i] > qs_[i - 1])) {
      std::ostringstream msg;
      msg << "coordinate map not strictly increasing between x = " << xs_[i - 1]
          << " and x = " << xs_[i];
      throw NonMonotoneMap(msg.str());
    }
  }
  target_ = Interval{end_value(false), end_value(true)};
}

double CoordinateMap::q_raw(double x) const {
  auto integrand = [this](double z) { return profile_.sqrt_mass(z); };
  const auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
  std::size_t j;
  if (it == xs_.end()) {
    j = xs_.size() - 1;
  } else if (it == xs_.begin()) {
    j = 0;
  } else {
    j = static_cast<std::size_t>(it - xs_.begin());
    if (x - xs_[j - 1] < xs_[j] - x) --j;
  }
  return qs_[j] + integrate(integrand, xs_[j], x, 1e-12);
}

double CoordinateMap::q(double x) const {
  if (closed_) return expr::eval(*closed_, x);
  return q_raw(x);
}

// Limit of q at one end of the source interval. For a finite end with a
// finite q value this is exact; otherwise it follows q along points that
// approach the end and reports infinity when the values keep growing.
double CoordinateMap::end_value(bool upper) const {
  const Interval& dom = profile_.domain();
  const double end = upper ? dom.hi : dom.lo;
  const double edge_x = upper ? xs_.back() : xs_.front();
  const double edge_q = upper ? qs_.back() : qs_.front();
  const double dir = upper ? 1.0 : -1.0;

  if (std::isfinite(end)) {
    try {
      const double v = closed_ ? expr::eval(*closed_, end) : q_raw(end);
      if (std::isfinite(v)) return v;
    } catch (const Error&) {
    }
  }

  double prev = edge_q;
  double prev_step = kInf;
  double x_prev = edge_x;
  for (int k = 1; k <= 60; ++k) {
    double xk;
    if (std::isfinite(end)) {
      xk = end - dir * std::abs(end - edge_x) * std::pow(10.0, -k);
    } else {
      xk = edge_x + dir * (std::abs(edge_x) + 1.0) * std::pow(10.0, k);
    }
    double v;
    try {
      if (closed_) {
        v = expr::eval(*closed_, xk);
      } else {
        auto integrand = [this](double z) { return profile_.sqrt_mass(z); };
        v = prev + integrate(integrand, x_prev, xk, 1e-12);
      }
    } catch (const Error&) {
      break;
    }
    if (!std::isfinite(v)) break;
    const double step = std::abs(v - prev);
    if (step <= 1e-13 * (1.0 + std::abs(v))) return v;
    if (k > 6 && step >= 0.5 * prev_step) return dir * kInf;
    prev_step = step;
    prev = v;
    x_prev = xk;
  }
  return (std::abs(prev_step) < 1e-9) ? prev : dir * kInf;
}

double CoordinateMap::x(double qv) const {
  if (!(qv > target_.lo && qv < target_.hi)) {
    std::ostringstream msg;
    msg << "q = " << qv << " outside the map's target interval (" << target_.lo
        << ", " << target_.hi << ")";
    throw OutOfRange(msg.str());
  }
  const Interval& dom = profile_.domain();
  double lo, hi, xk;
  const auto it = std::upper_bound(qs_.begin(), qs_.end(), qv);
  if (it == qs_.begin()) {
    hi = xs_.front();
    if (std::isfinite(dom.lo)) {
      lo = dom.lo;
    } else {
      double step = std::abs(hi) + 1.0;
      for (lo = hi - step; q(lo) > qv; lo = hi - step) step *= 4.0;
    }
    xk = 0.5 * (lo + hi);
  } else if (it == qs_.end()) {
    lo = xs_.back();
    if (std::isfinite(dom.hi)) {
      hi = dom.hi;
    } else {
      double step = std::abs(lo) + 1.0;
      for (hi = lo + step; q(hi) < qv; hi = lo + step) step *= 4.0;
    }
    xk = 0.5 * (lo + hi);
  } else {
    const std::size_t j = static_cast<std::size_t>(it - qs_.begin());
    lo = xs_[j - 1];
    hi = xs_[j];
    if (qs_[j - 1] == qv) return lo;
    const double t = (qv - qs_[j - 1]) / (qs_[j] - qs_[j - 1]);
    xk = lo + t * (hi - lo);
  }

  // Safeguarded Newton on q(x) - qv using q'(x) = sqrt(M(x)).
  const double qtol = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(qv));
  for (int iter = 0; iter < 200; ++iter) {
    const double r = q(xk) - qv;
    if (std::abs(r) <= qtol) return xk;
    if (r < 0.0)
      lo = xk;
    else
      hi = xk;
    const double slope = profile_.sqrt_mass(xk);
    double next = (slope > 0.0 && std::isfinite(slope)) ? xk - r / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == xk || hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * std::abs(xk))
      return next;
    xk = next;
  }
  return xk;
}

MassAndMap mass_from_f(const expr::Expr& f, Interval domain, int branch) {
  if (branch != 1 && branch != -1) throw BadParams("branch must be +1 or -1");
  for (double x : interior_samples(domain, kConstructionPoints)) {
    const double fx = expr::eval(f, x);
    if (!(fx > 0.0)) {
      std::ostringstream msg;
      msg << "f(x) = " << fx << " is not positive at x = " << x;
      throw NonpositiveF(msg.str());
    }
  }
  const int sign = derivative_sign(f, domain, "f");
  if (sign * branch < 0)
    throw NonMonotoneMap("q = ln f decreases on the domain; use the negative branch");
  const expr::Expr m = expr::power(expr::differentiate(f) / f, 2.0);
  MassProfile profile = mass_from_expr(m, domain);
  expr::Expr q = expr::unary(expr::Func::ln, f);
  if (branch < 0) q = -q;
  CoordinateMap map(profile, q, 0.0);
  return {std::move(profile), std::move(map)};
}

MassAndMap mass_from_g(const expr::Expr& g, Interval domain) {
  const int sign = derivative_sign(g, domain, "g");
  if (sign < 0) throw NonMonotoneMap("q = arctan g decreases on the domain");
  const expr::Expr m =
      expr::power(expr::differentiate(g) / (expr::constant(1.0) + expr::power(g, 2.0)), 2.0);
  MassProfile profile = mass_from_expr(m, domain);
  CoordinateMap map(profile, expr::unary(expr::Func::arctan, g), 0.0);
  return {std::move(profile), std::move(map)};
}

CoordinateMap map_from_mass(const MassProfile& p, double anchor) {
  return CoordinateMap(p, std::nullopt, anchor);
}

double q_of_x(const MassProfile& p, double x0, double x, double tol) {
  const Interval& dom = p.domain();
  if (!dom.contains_closed(x0) || !dom.contains_closed(x)) {
    std::ostringstream msg;
    msg << "quadrature limits [" << x0 << ", " << x << "] leave the mass domain";
    throw OutOfRange(msg.str());
  }
  return integrate([&p](double z) { return p.sqrt_mass(z); }, x0, x, tol);
}

double x_of_q(const CoordinateMap& map, double q) { return map.x(q); }

}  // namespace pdmspec::maps
