#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "pdmspec/error.hpp"
#include "pdmspec/maps.hpp"
#include "pdmspec/verify.hpp"

using namespace pdmspec;
using namespace pdmspec::maps;
using expr::parse;

TEST(MassProfile, ConstantMass) {
  const MassProfile p = mass_from_expr(parse("1"), {-20, 20});
  for (double x : {-19.0, -3.0, 0.0, 7.5}) {
    const Dual2 mu = p.mu_d2(x);
    EXPECT_EQ(mu.v, 1.0);
    EXPECT_EQ(mu.d1, 0.0);
    EXPECT_EQ(mu.d2, 0.0);
  }
}

TEST(MassProfile, InverseSquareLorentzian) {
  const MassProfile p = mass_from_expr(parse("(1+x^2)^-2"), Interval::real_line());
  EXPECT_NEAR(p.mu(0.0), 1.0, 1e-14);
  EXPECT_NEAR(p.mu(2.0), 5.0, 1e-13);
  EXPECT_NEAR(p.mu_d2(1.0).d1, 2.0, 1e-13);
  EXPECT_NEAR(p.mu_d2(1.0).d2, 2.0, 1e-12);
  EXPECT_NEAR(p.sqrt_mass(1.0), 0.5, 1e-15);
}

TEST(MassProfile, QuarticRatioAtOne) {
  const MassProfile p = mass_from_expr(parse("4*x^2/(x^2+1)^2"), {0, INFINITY});
  EXPECT_DOUBLE_EQ(p.mass(1.0), 1.0);
  EXPECT_DOUBLE_EQ(p.mu(1.0), 1.0);
}

TEST(MassProfile, RejectsNonpositiveMass) {
  EXPECT_THROW(mass_from_expr(parse("x"), {-1, 1}), NonpositiveMass);
  EXPECT_THROW(mass_from_expr(parse("x^2-1"), {-3, 3}), NonpositiveMass);
  EXPECT_THROW(mass_from_expr(parse("ln(x)"), {-1, 1}), DomainError);
}

TEST(MassFromF, ExponentialIsIdentity) {
  const auto [p, map] = mass_from_f(parse("exp(x)"), Interval::real_line());
  for (double x : {-4.0, -0.5, 0.0, 1.25, 9.0}) {
    EXPECT_NEAR(p.mass(x), 1.0, 1e-14);
    EXPECT_NEAR(map.q(x), x, 1e-13);
  }
}

TEST(MassFromF, AsinhMap) {
  const auto [p, map] = mass_from_f(parse("x+sqrt(x^2+1)"), Interval::real_line());
  EXPECT_NEAR(p.mass(0.0), 1.0, 1e-14);
  for (double x : {-3.0, -1.0, 0.5, 2.0}) {
    EXPECT_NEAR(p.mass(x), 1.0 / (1.0 + x * x), 1e-13);
    EXPECT_NEAR(map.q(x), std::asinh(x), 1e-13);
  }
}

TEST(MassFromF, NonMonotoneOnFullLine) {
  EXPECT_THROW(mass_from_f(parse("x^2+1"), Interval::real_line()), NonMonotoneMap);
  const auto [p, map] = mass_from_f(parse("x^2+1"), {0, INFINITY});
  EXPECT_NEAR(map.q(1.0), std::log(2.0), 1e-13);
  EXPECT_NEAR(p.mass(1.0), 1.0, 1e-14);
}

TEST(MassFromF, NonpositiveF) {
  EXPECT_THROW(mass_from_f(parse("x"), {-1, 1}), NonpositiveF);
  EXPECT_THROW(mass_from_f(parse("exp(x)"), Interval::real_line(), 0), BadParams);
}

TEST(MassFromF, NegativeBranchFlipsMap) {
  const auto [p, map] = mass_from_f(parse("sqrt(x^2+1)-x"), Interval::real_line(), -1);
  EXPECT_NEAR(map.q(1.0), std::asinh(1.0), 1e-13);
  EXPECT_NEAR(p.mass(1.0), 0.5, 1e-14);
}

TEST(MassFromG, ArctanMap) {
  const auto [p, map] = mass_from_g(parse("x"), Interval::real_line());
  EXPECT_NEAR(map.q(1.0), std::numbers::pi / 4, 1e-14);
  for (double x : {-2.0, 0.0, 0.5, 3.0}) EXPECT_NEAR(p.mass(x), std::pow(1 + x * x, -2), 1e-14);
  EXPECT_NEAR(map.target().lo, -std::numbers::pi / 2, 1e-12);
  EXPECT_NEAR(map.target().hi, std::numbers::pi / 2, 1e-12);
}

TEST(MassFromG, CubicOnHalfLine) {
  const auto [p, map] = mass_from_g(parse("x^3"), {0, INFINITY});
  // g' = 3, 1 + g^2 = 2 at x = 1.
  EXPECT_NEAR(p.mass(1.0), 2.25, 1e-13);
  EXPECT_NEAR(map.q(1.0), std::numbers::pi / 4, 1e-14);
  EXPECT_THROW(mass_from_g(parse("x^2"), Interval::real_line()), NonMonotoneMap);
}

TEST(Quadrature, Examples) {
  EXPECT_NEAR(q_of_x(mass_from_expr(parse("1"), Interval::real_line()), 0, 2), 2.0, 1e-12);
  EXPECT_NEAR(q_of_x(mass_from_expr(parse("(1+x^2)^-2"), Interval::real_line()), 0, 1),
              std::numbers::pi / 4, 1e-9);
  const MassProfile half = mass_from_expr(parse("4*x^2/(x^2+1)^2"), {0, INFINITY});
  EXPECT_NEAR(q_of_x(half, 1e-300, 1.0), std::log(2.0), 1e-9);
  EXPECT_NEAR(q_of_x(half, 1.0, 1e-300), -std::log(2.0), 1e-9);
}

TEST(InverseMap, Examples) {
  const auto id = mass_from_f(parse("exp(x)"), Interval::real_line());
  EXPECT_NEAR(x_of_q(id.map, 0.3), 0.3, 1e-12);
  const auto at = mass_from_g(parse("x"), Interval::real_line());
  EXPECT_NEAR(x_of_q(at.map, std::numbers::pi / 4), 1.0, 1e-9);
  EXPECT_THROW(x_of_q(at.map, 2.0), OutOfRange);
}

TEST(InverseMap, RoundTripOnTableNodes) {
  const MassProfile p = mass_from_expr(parse("(1+x^2)^-2"), {-6, 6});
  const CoordinateMap raw = map_from_mass(p, 0.0);
  const auto closed = mass_from_g(parse("x"), Interval::real_line());
  for (const CoordinateMap* m : {&raw, &closed.map}) {
    ASSERT_GT(m->table_x().size(), 16u);
    for (std::size_t i = 1; i + 1 < m->table_x().size(); ++i) {
      const double x = m->table_x()[i];
      if (!std::isfinite(x)) continue;
      EXPECT_NEAR(x_of_q(*m, m->q(x)), x, 1e-9 * std::max(1.0, std::abs(x)));
      EXPECT_LE(std::abs(m->q(x_of_q(*m, m->table_q()[i])) - m->table_q()[i]), 1e-9);
    }
  }
  EXPECT_NEAR(raw.q(1.0), std::atan(1.0), 1e-9);
}

TEST(InverseMap, TableIsStrictlyIncreasing) {
  const auto r = mass_from_f(parse("x+sqrt(x^2+1)"), Interval::real_line());
  const auto& qs = r.map.table_q();
  for (std::size_t i = 1; i < qs.size(); ++i) EXPECT_LT(qs[i - 1], qs[i]);
}

TEST(CoordinateMap, DerivativeIsInverseMuAtSecondOrder) {
  const MassProfile p = mass_from_expr(parse("1/(1+x^2)"), {-8, 8});
  const CoordinateMap m = map_from_mass(p, 0.0);
  for (double x : {-1.3, 0.4, 2.1}) {
    std::vector<double> err;
    for (double h : {0.2, 0.1, 0.05}) {
      const double d = (m.q(x + h) - m.q(x - h)) / (2 * h);
      err.push_back(std::abs(d - 1.0 / p.mu(x)));
    }
    EXPECT_TRUE(verify::ratios_within(verify::richardson_ratios(err))) << "x = " << x;
  }
}

TEST(CoordinateMap, FFromIntegralReproducesMass) {
  // With M = (1+x^2)^-2 the integral of sqrt(M) is arctan x.
  const MassProfile p = mass_from_expr(parse("(1+x^2)^-2"), Interval::real_line());
  const auto r = mass_from_f(parse("exp(arctan(x))"), Interval::real_line());
  for (int k = -40; k <= 40; ++k) {
    const double x = 0.25 * k;
    EXPECT_NEAR(r.profile.mass(x), p.mass(x), 1e-8);
  }
}
