// Acceptance suite: one PASS/FAIL line per criterion.
//
//   pdmspec_acceptance [--only AC3,AC5] [--expect-fail AC4]
//
// Exit status is 0 when the set of failing criteria equals the expected set.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oracles.hpp"
#include "pdmspec/analytic.hpp"
#include "pdmspec/eig.hpp"
#include "pdmspec/models.hpp"
#include "pdmspec/potentials.hpp"
#include "pdmspec/verify.hpp"

using namespace pdmspec;
using discretize::GridSpec;
using cplx = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::vector<std::string> info;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[fail: " << what << "] ";
    }
  }
};

using Criterion = std::function<void(Outcome&)>;

double max_abs_im(const std::vector<cplx>& v) {
  double m = 0.0;
  for (const cplx& z : v) m = std::max(m, std::abs(z.imag()));
  return m;
}

eig::SpectrumReport scarf_reference(double V2, int N) {
  const auto H = discretize::assemble_reference(potentials::scarf2_potential(V2 * V2, V2),
                                                GridSpec(-20, 20, N));
  return eig::analyze(H, {eig::Confinement::open, 0.0});
}

void ac1(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rep = scarf_reference(2.5, 800);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto b = rep.bound_values();
  o.require(b.size() == 2, "exactly 2 bound states");
  if (b.size() == 2) {
    o.require(std::abs(b[0].real() + 4.0) <= 5e-3, "E0 = -4 within 5e-3");
    o.require(std::abs(b[1].real() + 1.0) <= 5e-3, "E1 = -1 within 5e-3");
  }
  o.require(max_abs_im(b) <= 1e-6, "|Im| <= 1e-6");
  o.require(secs <= 60.0, "runtime <= 60 s");
  o.detail << "bound=" << b.size();
  for (const cplx& z : b) o.detail << " " << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
  o.detail << " max|Im|=" << max_abs_im(b) << " t=" << secs << "s";
}

void ac2(Outcome& o) {
  const bool e1 = analytic::scarf2_levels({0.16, 0.4, +1}).empty();
  const bool e2 = analytic::scarf2_levels({0.16, 0.4, -1}).empty();
  const bool e3 = analytic::scarf2_levels({6.25, 2.5, -1}).empty();
  o.require(e1 && e2 && e3, "analytic lists empty");
  const auto rep = scarf_reference(0.4, 800);
  double deepest = 0.0;
  for (const cplx& z : rep.bound_values()) deepest = std::min(deepest, z.real());
  o.require(deepest >= -0.05, "no numerical bound state below -0.05");
  o.detail << "analytic empty=" << (e1 && e2 && e3) << " numerical bound=" << rep.bound_count()
           << " deepest=" << deepest;
}

void ac3(Outcome& o) {
  const auto H = discretize::assemble_reference(potentials::periodic_potential(),
                                                GridSpec(-kPi, kPi, 600));
  eig::AnalyzeOptions opts;
  opts.confinement = eig::Confinement::hard_wall;
  opts.max_vectors = 16;
  const auto rep = eig::analyze(H, opts);
  const auto merged = eig::merge_conjugate_pairs(rep.bound_values());
  o.detail << "levels:";
  for (int n : {1, 3, 4, 5}) {
    const double E = analytic::periodic_level(n);
    double best = INFINITY;
    for (const cplx& z : merged) best = std::min(best, std::abs(z - E));
    o.require(best <= 5e-3, "level n=" + std::to_string(n) + " present");
    o.detail << " n" << n << " d=" << best;
  }
  int resolved_near_gap = 0;
  for (const auto& e : rep.entries)
    if (std::abs(e.value - cplx(-9.0 / 16)) < 0.1 && e.has_vector() && e.residual <= 1e-8)
      ++resolved_near_gap;
  o.require(resolved_near_gap == 0, "no resolved eigenvalue within 0.1 of -9/16");
  o.detail << " near(-9/16)=" << resolved_near_gap;

  const auto V = potentials::periodic_potential();
  double worst_ode = 0.0, worst_edge = 0.0;
  for (int n : {1, 3, 4, 5}) {
    const double E = analytic::periodic_level(n);
    const auto phi = [n](double q) { return analytic::periodic_eigenfunction(n, q); };
    double num = 0.0, den = 0.0;
    for (int k = 0; k < 2000; ++k) {
      const double q = -kPi + 2 * kPi * (k + 1) / 2001.0;
      num += std::norm(-oracle::fd2_5(phi, q, 1e-3) + (V(q) - E) * phi(q));
      den += std::norm(phi(q));
    }
    worst_ode = std::max(worst_ode, std::sqrt(num / den));
    worst_edge = std::max({worst_edge, std::abs(phi(-kPi)), std::abs(phi(kPi))});
  }
  o.require(worst_ode <= 1e-4, "eigenfunction ODE residual <= 1e-4");
  o.require(worst_edge <= 1e-12, "eigenfunctions vanish at +-pi");
  o.detail << " ode=" << worst_ode << " edge=" << worst_edge;
  std::ostringstream pair;
  for (const cplx& z : rep.bound_values())
    if (std::abs(z.real() - 39.0 / 16) < 0.05) pair << " " << z;
  o.info.push_back("n=4 computed as a near-real pair" + pair.str() + ", compared by its centroid");
}

struct Ladder {
  verify::VerificationReport main;
  verify::VerificationReport flipped;
};

Ladder intertwining(const models::TargetModel& t, Interval xr, verify::DefectScope scope) {
  const std::vector<int> Ns = {200, 400, 800};
  auto build = [&](models::Variation var) {
    return [&, var](int N) { return models::assemble_pair(t, GridSpec(xr.lo, xr.hi, N), var); };
  };
  return {verify::intertwining_ladder(build({}), Ns, scope),
          verify::intertwining_ladder(build({true, 1.0}), Ns, scope)};
}

std::string series(const std::vector<double>& v) {
  std::ostringstream s;
  s.precision(3);
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? "," : "") << v[i];
  return s.str();
}

void ac4(Outcome& o) {
  const auto scarf = models::scarf2_asinh_target(2.5);
  const auto periodic = models::periodic_arctan_target();
  const struct {
    const char* name;
    const models::TargetModel* t;
    Interval xr;
  } cases[] = {{"scarf2", &scarf, models::matched_interval(scarf.map, -3, 3)},
               {"periodic", &periodic, models::matched_interval(periodic.map, -1.2, 1.2)}};
  for (const auto& c : cases) {
    const Ladder whole = intertwining(*c.t, c.xr, verify::DefectScope::whole);
    o.require(verify::ratios_within(whole.main.ratios), std::string(c.name) + " ratio 4 +- 20%");
    bool floor = true;
    for (double d : whole.flipped.defects) floor = floor && d >= 1e-3;
    o.require(floor, std::string(c.name) + " flipped-W control >= 1e-3");
    o.detail << c.name << " defects=" << series(whole.main.defects)
             << " ratios=" << series(whole.main.ratios)
             << " flipped=" << series(whole.flipped.defects) << "; ";

    const Ladder probe = intertwining(*c.t, c.xr, verify::DefectScope::probe);
    std::ostringstream info;
    info << c.name << " probe-subspace defect " << series(probe.main.defects) << " ratios "
         << series(probe.main.ratios) << " ("
         << (verify::ratios_within(probe.main.ratios) ? "second order" : "not second order")
         << "), flipped-W " << series(probe.flipped.defects);
    o.info.push_back(info.str());
  }
}

verify::VerificationReport matched_compare(const potentials::GeneratorSpec& gen,
                                           const models::TargetModel& t, double qa, double qb,
                                           int N, int K, double tol) {
  eig::AnalyzeOptions opts;
  opts.confinement = eig::Confinement::hard_wall;
  opts.max_vectors = K;
  const auto ref_pot = potentials::reference_potential(gen, Interval{qa, qb});
  const auto ref = eig::lowest_bound(
      eig::analyze(discretize::assemble_reference(ref_pot, GridSpec(qa, qb, N)), opts), K);
  const Interval xr = models::matched_interval(t.map, qa, qb);
  const auto tgt = eig::lowest_bound(
      eig::analyze(discretize::assemble_target(t.profile, t.potential, GridSpec(xr.lo, xr.hi, N)),
                   opts),
      K);
  return verify::isospectral_compare(tgt, ref, tol);
}

void ac5(Outcome& o) {
  const auto per = matched_compare(potentials::periodic_generator(),
                                   models::periodic_arctan_target(), -1.2, 1.2, 600, 4, 5e-3);
  const auto sc = matched_compare(potentials::scarf2_generator(2.5),
                                  models::scarf2_asinh_target(2.5), -3, 3, 600, 4, 5e-3);
  o.require(per.pass, "periodic vs M=(1+x^2)^-2 within 5e-3");
  o.require(sc.pass, "scarf2 vs M=1/(1+x^2) within 5e-3");
  o.detail << "periodic max dist=" << per.finest() << " (" << per.matches.size()
           << " levels); scarf2 max dist=" << sc.finest() << " (" << sc.matches.size()
           << " levels)";
}

void ac6(Outcome& o) {
  using analytic::Rational;
  const auto a = analytic::scarf2_special_levels(Rational(3, 2));
  const auto b = analytic::scarf2_special_levels(Rational(5, 2));
  o.require(!a.empty() && b.size() >= 2 && a[0] == Rational(-1) && b[1] == Rational(-1),
            "E0(3/2) = E1(5/2) = -1");
  std::mt19937_64 rng(606);
  std::uniform_int_distribution<int> num(1, 500), den(1, 64), shift(1, 8);
  int tested = 0, equal = 0;
  while (tested < 50) {
    const Rational V2(num(rng), den(rng));
    if (V2 <= Rational(1, 2)) continue;
    const int dn = shift(rng);
    const auto lo = analytic::scarf2_special_levels(V2);
    const auto hi = analytic::scarf2_special_levels(V2 + dn);
    bool ok = hi.size() == lo.size() + static_cast<std::size_t>(dn);
    for (std::size_t n = 0; ok && n < lo.size(); ++n) {
      const Rational direct = -(V2 - n - Rational(1, 2)) * (V2 - n - Rational(1, 2));
      ok = lo[n] == hi[n + dn] && lo[n] == direct;
    }
    equal += ok;
    ++tested;
  }
  o.require(equal == tested, "shift identity on 50 random rationals");
  o.detail << "exact pairs equal: " << equal << "/" << tested;
}

void ac7(Outcome& o) {
  const double eta = 2.0;
  for (int L : {10, 20, 40}) {
    const double a = -L, b = L + 10.0;
    const auto pot = potentials::morse_potential(eta);
    const auto H = discretize::assemble_reference(pot, GridSpec(a, b, 600));
    const auto rep = eig::analyze(
        H, {eig::Confinement::open, potentials::boundary_floor(pot, a, b)});
    o.require(rep.bound_count() == 0, "empty bound set for L=" + std::to_string(L));
    int candidates = 0;
    for (const auto& e : rep.entries) candidates += e.candidate;
    o.detail << "L=" << L << " bound=" << rep.bound_count() << " candidates=" << candidates << "; ";
  }
}

void ac8(Outcome& o) {
  const auto a = potentials::periodic_potential();
  const auto b = potentials::periodic_potential_trig();
  double d30 = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const double q = -kPi + 2 * kPi * (k + 0.5) / 10000;
    d30 = std::max(d30, std::abs(a(q) - b(q)));
  }
  o.require(d30 <= 1e-12, "trigonometric and compact periodic forms agree");

  const double V2 = 2.5;
  const auto ref = potentials::reference_potential(potentials::scarf2_generator(V2));
  double d26 = 0.0;
  for (const char* f : {"x+sqrt(x^2+1)", "exp(x)", "2*exp(x/3)"}) {
    const auto mm = maps::mass_from_f(expr::parse(f), Interval::real_line());
    const auto composed = potentials::composed_in_x(ref, mm.map);
    const auto closed = potentials::scarf2_isospectral_f(V2, expr::parse(f), Interval::real_line());
    for (int k = 0; k <= 1000; ++k) {
      const double x = -5 + 0.01 * k;
      d26 = std::max(d26, std::abs(composed(x) - closed(x)));
    }
  }
  {
    const Interval half{0, INFINITY};
    const auto mm = maps::mass_from_f(expr::parse("x^2+1"), half);
    const auto composed = potentials::composed_in_x(ref, mm.map);
    const auto closed = potentials::scarf2_isospectral_f(V2, expr::parse("x^2+1"), half);
    for (int k = 1; k <= 1000; ++k) d26 = std::max(d26, std::abs(composed(0.005 * k) - closed(0.005 * k)));
  }
  o.require(d26 <= 1e-10, "f-family closed form equals composed reference");

  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> u(0.5, 20.0);
  double dcol = 0.0;
  int count_mismatch = 0;
  for (int k = 0; k < 100; ++k) {
    double v = u(rng);
    if (v <= 0.5) v = 0.6;
    const auto g = analytic::scarf2_levels({v * v, v, +1});
    const auto s = analytic::scarf2_special_levels(v);
    if (g.size() != s.size()) {
      ++count_mismatch;
      continue;
    }
    for (std::size_t n = 0; n < s.size(); ++n) dcol = std::max(dcol, std::abs(g[n] - s[n]));
  }
  o.require(count_mismatch == 0 && dcol <= 1e-12, "general levels collapse to special case");
  o.detail << "forms=" << d30 << " f-family=" << d26 << " collapse=" << dcol
           << " count mismatches=" << count_mismatch;
}

void ac9(Outcome& o) {
  std::mt19937_64 rng(909);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const int n = 1 + k % 4;
    const Eigen::MatrixXcd A = oracle::random_complex(rng, n);
    const auto roots = oracle::poly_roots(oracle::char_poly(A));
    worst = std::max(worst, oracle::multiset_distance(eig::spectrum(A), roots));
  }
  double herm = 0.0;
  for (int k = 0; k < 200; ++k) {
    const int n = 1 + k % 4 + (k % 10 == 0 ? 60 : 0);
    herm = std::max(herm, max_abs_im(eig::spectrum(oracle::random_hermitian(rng, n))));
  }
  o.require(worst <= 1e-10, "random matrices vs characteristic-polynomial roots");
  o.require(herm <= 1e-10, "Hermitian inputs real");
  o.detail << "max root distance=" << worst << " Hermitian max|Im|=" << herm;
}

void ac10(Outcome& o) {
  struct Case {
    const char* text;
    double lo, hi;
  };
  const Case cases[] = {{"exp(x)", -3, 3},     {"ln(x)", 0.2, 5},     {"sin(x)", -4, 4},
                        {"cos(x)", -4, 4},     {"tan(x)", -1.2, 1.2}, {"sinh(x)", -3, 3},
                        {"cosh(x)", -3, 3},    {"tanh(x)", -3, 3},    {"sech(x)", -3, 3},
                        {"arctan(x)", -4, 4}, {"sqrt(x)", 0.2, 5},   {"abs(x)", 0.1, 3},
                        {"-x", -3, 3},         {"x^2.5", 0.2, 3}};
  std::mt19937_64 rng(1010);
  double w1 = 0.0, w2 = 0.0;
  for (const Case& c : cases) {
    const expr::Expr e = expr::parse(c.text);
    const auto f = [&](double x) { return expr::eval(e, x); };
    std::uniform_real_distribution<double> u(c.lo, c.hi);
    for (int k = 0; k < 100; ++k) {
      const double x = u(rng);
      const Dual2 d = expr::eval_d2(e, x);
      w1 = std::max(w1, std::abs(d.d1 - oracle::fd1(f, x, 1e-5)) / std::max(1.0, std::abs(d.d1)));
      w2 = std::max(w2, std::abs(d.d2 - oracle::fd2(f, x, 1e-4)) / std::max(1.0, std::abs(d.d2)));
    }
  }
  o.require(w1 <= 1e-6, "first derivatives within 1e-6");
  o.require(w2 <= 1e-4, "second derivatives within 1e-4");
  o.detail << "max rel d1 err=" << w1 << " d2 err=" << w2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pdmspec acceptance suite"};
  std::vector<std::string> only, expect_fail;
  app.add_option("--only", only, "Run only these criteria")->delimiter(',');
  app.add_option("--expect-fail", expect_fail, "Criteria known to fail")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, Criterion>> all = {
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
      {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10}};
  const std::set<std::string> selected(only.begin(), only.end());
  std::set<std::string> expected;
  for (const auto& id : expect_fail)
    if (selected.empty() || selected.count(id)) expected.insert(id);

  std::set<std::string> failed;
  for (const auto& [id, run] : all) {
    if (!selected.empty() && !selected.count(id)) continue;
    Outcome o;
    try {
      run(o);
    } catch (const std::exception& err) {
      o.pass = false;
      o.detail << "[exception: " << err.what() << "]";
    }
    std::printf("%-4s %s  %s\n", id.c_str(), o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
    for (const auto& line : o.info) std::printf("     info: %s\n", line.c_str());
    std::fflush(stdout);
    if (!o.pass) failed.insert(id);
  }
  std::printf("%zu failed", failed.size());
  if (!expected.empty()) {
    std::printf(" (expected to fail:");
    for (const auto& id : expected) std::printf(" %s", id.c_str());
    std::printf(")");
  }
  std::printf("\n");
  return failed == expected ? 0 : 1;
}
