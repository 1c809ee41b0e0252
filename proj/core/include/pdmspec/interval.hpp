#pragma once

#include <cmath>
#include <limits>
#include <vector>

namespace pdmspec {

/// Open interval (lo, hi); either end may be infinite.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  static Interval real_line() { return {}; }

  bool finite() const { return std::isfinite(lo) && std::isfinite(hi); }
  bool contains(double x) const { return x > lo && x < hi; }
  bool contains_closed(double x) const { return x >= lo && x <= hi; }
  double width() const { return hi - lo; }
};

/// Strictly interior sample points of `dom`. Infinite ends are reached
/// through a tangent/rational change of variable, so the points spread over
/// many decades; `window` clips the result to |x| <= window when nonzero.
std::vector<double> interior_samples(const Interval& dom, int count,
                                     double window = 0.0);

}  // namespace pdmspec
