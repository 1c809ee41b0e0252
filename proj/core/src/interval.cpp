#include "pdmspec/interval.hpp"

#include <algorithm>
#include <numbers>

namespace pdmspec {

std::vector<double> interior_samples(const Interval& dom, int count, double window) {
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(count));
  const bool lo_inf = !std::isfinite(dom.lo);
  const bool hi_inf = !std::isfinite(dom.hi);
  for (int i = 1; i <= count; ++i) {
    const double t = static_cast<double>(i) / (count + 1);  // (0, 1)
    double x;
    if (!lo_inf && !hi_inf) {
      x = dom.lo + t * (dom.hi - dom.lo);
    } else if (lo_inf && hi_inf) {
      x = std::tan(std::numbers::pi * (t - 0.5));
    } else if (lo_inf) {
      x = dom.hi - (1.0 - t) / t;
    } else {
      x = dom.lo + t / (1.0 - t);
    }
    if (window > 0.0) {
      if (std::abs(x) > window) continue;
    }
    xs.push_back(x);
  }
  if (window > 0.0 && xs.size() < static_cast<std::size_t>(count) / 2) {
    // The clipped window holds too few points; sample it uniformly instead.
    const double lo = std::max(dom.lo, -window);
    const double hi = std::min(dom.hi, window);
    xs.clear();
    for (int i = 1; i <= count; ++i)
      xs.push_back(lo + (hi - lo) * static_cast<double>(i) / (count + 1));
  }
  return xs;
}

}  // namespace pdmspec
