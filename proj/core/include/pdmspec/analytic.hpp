#pragma once

#include <complex>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace pdmspec::analytic {

using Rational = boost::multiprecision::cpp_rational;

struct ScarfParams {
  double V1 = 0.0;
  double V2 = 0.0;
  int epsilon = +1;
};

/// E_n = -[(sqrt(V1 + 1/4 + |V2|) + eps sqrt(V1 + 1/4 - |V2|))/2 - n - 1/2]^2
/// for every n >= 0 strictly below the admissibility bound. Throws
/// BadParams unless V1 > 0, V2 != 0, eps = +-1 and V1 + 1/4 >= |V2|.
std::vector<double> scarf2_levels(const ScarfParams& p);

/// Specialization V1 = V2^2: E_n = -(|V2| - n - 1/2)^2, n < |V2| - 1/2.
/// Throws BadParams for |V2| <= 1/2.
std::vector<double> scarf2_special_levels(double V2);
std::vector<Rational> scarf2_special_levels(const Rational& V2);

/// Exact rational value of a finite double.
Rational exact(double v);
std::string to_string(const Rational& r);

struct CrossingPair {
  int n1 = 0;
  double V21 = 0.0;
  int n2 = 0;
  double V22 = 0.0;
  int dn = 0;
  Rational energy;
};

struct CrossingReport {
  std::vector<CrossingPair> pairs;
};

/// Every pair of grid values with V22 - V21 = dn a positive integer, and
/// every level n1 of V21 paired with n1 + dn of V22; comparisons are exact.
/// Throws BadParams if a grid value is not above 1/2.
CrossingReport find_crossings(const std::vector<double>& V2_grid);

struct FlownAway {
  int n_max = -1;
  int count = 0;
  /// |V2| - 1/2: levels exist for n strictly below it.
  double window = 0.0;
  /// Deepest and shallowest admissible energies.
  double deepest = 0.0;
  double shallowest = 0.0;
};

FlownAway flown_away_report(double V2);

/// E_n = n^2/4 - 25/16. Throws MissingState for n = 2, BadParams for n <= 0.
std::vector<double> periodic_levels(const std::vector<int>& n_list);
double periodic_level(int n);

/// Closed-form eigenfunction on [-pi, pi]. Throws MissingState for n = 2,
/// BadParams for n <= 0 and OutOfRange for |q| > pi.
std::complex<double> periodic_eigenfunction(int n, double q);

}  // namespace pdmspec::analytic
