#include "pdmspec/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <tuple>

#include "pdmspec/error.hpp"

namespace pdmspec::verify {

namespace {

constexpr double kUndetermined = 1e-8;

double safe_ratio(double num, double den) {
  return den == 0.0 ? (num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity()) : num / den;
}

}  // namespace

const char* to_string(DefectScope s) noexcept { return s == DefectScope::probe ? "probe" : "whole"; }

Eigen::MatrixXcd probe_basis(const GridSpec& grid, int K) {
  if (K < 1 || K > grid.N()) throw BadParams("probe count must lie in 1..N");
  const int n = grid.N();
  Eigen::MatrixXd P(n, K);
  for (int i = 0; i < n; ++i) {
    const double t = (grid.node(i) - grid.a()) / (grid.b() - grid.a());
    const double s = 2.0 * t - 1.0;
    const double w = 1.0 - s * s;
    const double bump = w > 0.0 ? std::exp(1.0 - 1.0 / w) : 0.0;
    for (int k = 0; k < K; ++k) P(i, k) = bump * std::sin((k + 1) * std::numbers::pi * t);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(P);
  const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, K);
  return Q.cast<cplx>();
}

double intertwining_defect(const OperatorMatrix& eta, const OperatorMatrix& H, DefectScope scope,
                           int K) {
  discretize::require_same_grid(eta, H);
  if (scope == DefectScope::whole) {
    const Eigen::MatrixXcd D = eta.A * H.A - H.A.adjoint() * eta.A;
    return safe_ratio(D.norm(), eta.A.norm() * H.A.norm());
  }
  const Eigen::MatrixXcd P = probe_basis(H.grid, K);
  const Eigen::MatrixXcd HP = H.A * P;
  const Eigen::MatrixXcd EP = eta.A * P;
  const Eigen::MatrixXcd D = eta.A * HP - H.A.adjoint() * EP;
  return safe_ratio(D.norm(), EP.norm() * HP.norm());
}

double hermiticity_defect(const Eigen::MatrixXcd& A) {
  return safe_ratio((A - A.adjoint()).norm(), A.norm());
}

double anti_hermiticity_defect(const Eigen::MatrixXcd& A) {
  return safe_ratio((A + A.adjoint()).norm(), A.norm());
}

double hermiticity_defect(const OperatorMatrix& A) { return hermiticity_defect(A.A); }

double anti_hermiticity_defect(const OperatorMatrix& A) { return anti_hermiticity_defect(A.A); }

double product_hermiticity_defect(const OperatorMatrix& eta, const OperatorMatrix& H, bool anti,
                                  DefectScope scope, int K) {
  discretize::require_same_grid(eta, H);
  Eigen::MatrixXcd C;
  if (scope == DefectScope::whole) {
    C = eta.A * H.A;
  } else {
    const Eigen::MatrixXcd P = probe_basis(H.grid, K);
    C = P.adjoint() * (eta.A * (H.A * P));
  }
  return anti ? anti_hermiticity_defect(C) : hermiticity_defect(C);
}

std::vector<PseudoNorm> pseudo_norms(const OperatorMatrix& eta,
                                     const std::vector<Eigen::VectorXcd>& vectors) {
  std::vector<PseudoNorm> out;
  out.reserve(vectors.size());
  for (const auto& v : vectors) {
    if (v.size() != eta.N()) throw GridMismatch("vector length does not match the operator");
    const cplx z = v.dot(eta.A * v);
    out.push_back({z, std::abs(z) < kUndetermined});
  }
  return out;
}

VerificationReport reality_check(const eig::SpectrumReport& rep, double tol) {
  VerificationReport r;
  r.check = "reality";
  r.tolerance = tol;
  r.grids = {rep.N};
  double worst = 0.0;
  for (const cplx& z : rep.bound_values()) worst = std::max(worst, std::abs(z.imag()));
  r.defects = {worst};
  r.pass = worst <= tol;
  std::ostringstream d;
  d << rep.bound_count() << " bound states, max |Im| = " << worst;
  r.detail = d.str();
  return r;
}

VerificationReport reality_ladder(const std::vector<eig::SpectrumReport>& reps, double tol) {
  if (reps.empty()) throw BadParams("reality ladder needs at least one spectrum");
  VerificationReport r;
  r.check = "reality_ladder";
  r.tolerance = tol;
  for (const auto& rep : reps) {
    double worst = 0.0;
    for (const cplx& z : rep.bound_values()) worst = std::max(worst, std::abs(z.imag()));
    r.defects.push_back(worst);
    r.grids.push_back(rep.N);
  }
  r.ratios = richardson_ratios(r.defects);

  bool pass = true;
  double extrapolated = 0.0;
  int split = 0;
  std::ostringstream d;
  for (const cplx& z : reps.back().bound_values()) {
    const double im = std::abs(z.imag());
    if (im <= tol) {
      extrapolated = std::max(extrapolated, im);
      continue;
    }
    ++split;
    std::vector<double> seq;
    for (const auto& rep : reps) {
      const auto vals = rep.bound_values();
      if (vals.empty()) break;
      const auto it = std::min_element(vals.begin(), vals.end(), [&](const cplx& a, const cplx& b) {
        return std::abs(a - z) < std::abs(b - z);
      });
      seq.push_back(std::abs(it->imag()));
    }
    bool ok = seq.size() == reps.size() && seq.size() >= 3;
    double limit = im;
    if (ok) {
      const double a = seq[seq.size() - 3];
      const double b = seq[seq.size() - 2];
      const double c = seq[seq.size() - 1];
      const double den = (c - b) - (b - a);
      ok = a > b && b > c && den != 0.0;
      if (ok) {
        limit = std::abs(c - (c - b) * (c - b) / den);
        ok = limit <= std::max(tol, 0.1 * c);
      }
    }
    extrapolated = std::max(extrapolated, limit);
    if (!ok) {
      pass = false;
      d << "level " << z << " keeps |Im| under refinement; ";
    }
  }
  r.extrapolated = extrapolated;
  r.pass = pass;
  d << split << " level(s) with |Im| > tol at the finest grid, extrapolated max |Im| = "
    << extrapolated;
  r.detail = d.str();
  return r;
}

VerificationReport isospectral_compare(const std::vector<cplx>& a, const std::vector<cplx>& b,
                                       double tol) {
  VerificationReport r;
  r.check = "isospectral";
  r.tolerance = tol;
  std::vector<std::tuple<double, double, std::size_t, std::size_t>> cand;
  cand.reserve(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      cand.emplace_back(std::abs(a[i] - b[j]), std::min(a[i].real(), b[j].real()), i, j);
  std::sort(cand.begin(), cand.end(), [](const auto& x, const auto& y) {
    if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) < std::get<0>(y);
    return std::get<1>(x) < std::get<1>(y);
  });
  std::vector<char> ua(a.size(), 0);
  std::vector<char> ub(b.size(), 0);
  double worst = 0.0;
  for (const auto& [dist, key, i, j] : cand) {
    if (ua[i] || ub[j]) continue;
    ua[i] = ub[j] = 1;
    r.matches.push_back({a[i], b[j], dist});
    worst = std::max(worst, dist);
  }
  std::sort(r.matches.begin(), r.matches.end(), [](const Match& x, const Match& y) {
    return std::min(x.a.real(), x.b.real()) < std::min(y.a.real(), y.b.real());
  });
  r.defects = {worst};
  r.pass = a.size() == b.size() && worst <= tol;
  std::ostringstream d;
  d << a.size() << " vs " << b.size() << " levels, max pair distance " << worst;
  r.detail = d.str();
  return r;
}

VerificationReport isospectral_compare(const eig::SpectrumReport& a, const eig::SpectrumReport& b,
                                       double tol) {
  VerificationReport r = isospectral_compare(a.bound_values(), b.bound_values(), tol);
  r.grids = {a.N, b.N};
  return r;
}

std::vector<double> richardson_ratios(const std::vector<double>& defects) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < defects.size(); ++i)
    out.push_back(safe_ratio(defects[i], defects[i + 1]));
  return out;
}

bool ratios_within(const std::vector<double>& ratios, double target, double band) {
  if (ratios.empty()) return false;
  return std::all_of(ratios.begin(), ratios.end(), [&](double q) {
    return q >= target * (1.0 - band) && q <= target * (1.0 + band);
  });
}

VerificationReport intertwining_ladder(const std::function<OperatorPair(int)>& build,
                                       const std::vector<int>& Ns, DefectScope scope, double tol,
                                       int K) {
  VerificationReport r;
  r.check = std::string("intertwining_") + to_string(scope);
  r.tolerance = tol;
  for (int N : Ns) {
    const OperatorPair p = build(N);
    r.defects.push_back(intertwining_defect(p.eta, p.H, scope, K));
    r.grids.push_back(N);
  }
  r.ratios = richardson_ratios(r.defects);
  r.pass = !r.defects.empty() && r.finest() <= tol;
  std::ostringstream d;
  d << "second-order ratios " << (ratios_within(r.ratios) ? "within" : "outside") << " 4 +- 20%";
  r.detail = d.str();
  return r;
}

}  // namespace pdmspec::verify
