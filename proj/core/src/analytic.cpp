#include "pdmspec/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pdmspec/error.hpp"

namespace pdmspec::analytic {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_special(double V2) {
  if (!std::isfinite(V2) || !(std::abs(V2) > 0.5))
    throw BadParams("special Scarf II levels need |V2| > 1/2");
}

/// Number of integers n >= 0 with n < bound, excluding n within rounding
/// of the bound itself.
int admissible_count(double bound) {
  const double guard = 8.0 * kEps * std::max(1.0, std::abs(bound));
  if (!(bound > guard)) return 0;
  int count = static_cast<int>(std::ceil(bound));
  if (bound - (count - 1) <= guard) --count;
  return std::max(count, 0);
}

}  // namespace

std::vector<double> scarf2_levels(const ScarfParams& p) {
  if (!std::isfinite(p.V1) || !std::isfinite(p.V2) || !(p.V1 > 0.0) || p.V2 == 0.0)
    throw BadParams("Scarf II needs V1 > 0 and V2 != 0");
  if (p.epsilon != 1 && p.epsilon != -1) throw BadParams("epsilon must be +1 or -1");
  const double a = std::abs(p.V2);
  const double inner = p.V1 + 0.25 - a;
  if (inner < 0.0) throw BadParams("V1 + 1/4 - |V2| must be nonnegative");
  const double s = 0.5 * (std::sqrt(p.V1 + 0.25 + a) + p.epsilon * std::sqrt(inner));
  const int count = admissible_count(s - 0.5);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int n = 0; n < count; ++n) {
    const double t = s - n - 0.5;
    out.push_back(-t * t);
  }
  return out;
}

std::vector<double> scarf2_special_levels(double V2) {
  require_special(V2);
  const double a = std::abs(V2);
  const int count = admissible_count(a - 0.5);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int n = 0; n < count; ++n) {
    const double t = a - n - 0.5;
    out.push_back(-t * t);
  }
  return out;
}

std::vector<Rational> scarf2_special_levels(const Rational& V2) {
  const Rational half(1, 2);
  const Rational a = V2 < 0 ? Rational(-V2) : V2;
  if (!(a > half)) throw BadParams("special Scarf II levels need |V2| > 1/2");
  std::vector<Rational> out;
  for (int n = 0; Rational(n) < a - half; ++n) {
    const Rational t = a - n - half;
    out.push_back(-t * t);
  }
  return out;
}

Rational exact(double v) {
  if (!std::isfinite(v)) throw BadParams("cannot convert a non-finite value to a rational");
  int e = 0;
  const double m = std::frexp(v, &e);
  // m * 2^53 is an integer for every finite double.
  const auto mant = static_cast<long long>(std::ldexp(m, 53));
  Rational r(mant);
  e -= 53;
  boost::multiprecision::cpp_int p = 1;
  p <<= std::abs(e);
  return e >= 0 ? r * Rational(p) : r / Rational(p);
}

std::string to_string(const Rational& r) {
  std::ostringstream s;
  s << numerator(r);
  if (denominator(r) != 1) s << "/" << denominator(r);
  return s.str();
}

CrossingReport find_crossings(const std::vector<double>& V2_grid) {
  std::vector<std::pair<double, Rational>> grid;
  for (double v : V2_grid) {
    if (!std::isfinite(v) || !(v > 0.5)) throw BadParams("crossing grid values must exceed 1/2");
    grid.emplace_back(v, exact(v));
  }
  std::sort(grid.begin(), grid.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [](const auto& a, const auto& b) { return a.second == b.second; }),
             grid.end());
  CrossingReport rep;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto levels1 = scarf2_special_levels(grid[i].second);
    for (std::size_t j = i + 1; j < grid.size(); ++j) {
      const Rational diff = grid[j].second - grid[i].second;
      if (denominator(diff) != 1) continue;
      const int dn = static_cast<int>(numerator(diff));
      const auto levels2 = scarf2_special_levels(grid[j].second);
      for (std::size_t n1 = 0; n1 < levels1.size(); ++n1) {
        const std::size_t n2 = n1 + static_cast<std::size_t>(dn);
        if (n2 >= levels2.size() || levels2[n2] != levels1[n1]) continue;
        rep.pairs.push_back({static_cast<int>(n1), grid[i].first, static_cast<int>(n2),
                             grid[j].first, dn, levels1[n1]});
      }
    }
  }
  return rep;
}

FlownAway flown_away_report(double V2) {
  const auto levels = scarf2_special_levels(V2);
  FlownAway r;
  r.count = static_cast<int>(levels.size());
  r.n_max = r.count - 1;
  r.window = std::abs(V2) - 0.5;
  if (!levels.empty()) {
    r.deepest = levels.front();
    r.shallowest = levels.back();
  }
  return r;
}

double periodic_level(int n) {
  if (n <= 0) throw BadParams("periodic levels need n >= 1");
  if (n == 2) throw MissingState("the n = 2 periodic state is missing from the spectrum");
  return n * n / 4.0 - 25.0 / 16.0;
}

std::vector<double> periodic_levels(const std::vector<int>& n_list) {
  std::vector<double> out;
  out.reserve(n_list.size());
  for (int n : n_list) out.push_back(periodic_level(n));
  return out;
}

std::complex<double> periodic_eigenfunction(int n, double q) {
  (void)periodic_level(n);
  if (!std::isfinite(q) || std::abs(q) > std::numbers::pi)
    throw OutOfRange("periodic eigenfunction is defined on [-pi, pi]");
  using C = std::complex<double>;
  const double n2 = static_cast<double>(n) * n;
  const double phase = 0.5 * n * (std::numbers::pi + q);
  const C a = C((16.0 - n2) * std::cos(q), -2.0 * (n2 - 4.0) * std::sin(q)) * std::sin(phase);
  const double b = 6.0 * n * std::sin(q) * std::cos(phase);
  return (a - b) / C(std::cos(q), 2.0 * std::sin(q));
}

}  // namespace pdmspec::analytic
