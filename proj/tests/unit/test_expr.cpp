#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pdmspec/error.hpp"
#include "pdmspec/expr.hpp"

using namespace pdmspec;
using namespace pdmspec::expr;

namespace {

template <class T>
const T& as(const Expr& e) {
  return std::get<T>(e.node().get());
}

struct FnCase {
  const char* text;
  double lo;
  double hi;
};

const FnCase kFunctions[] = {
    {"exp(x)", -3, 3},     {"ln(x)", 0.2, 5},     {"sin(x)", -4, 4},   {"cos(x)", -4, 4},
    {"tan(x)", -1.2, 1.2}, {"sinh(x)", -3, 3},    {"cosh(x)", -3, 3},  {"tanh(x)", -3, 3},
    {"sech(x)", -3, 3},    {"arctan(x)", -4, 4},  {"sqrt(x)", 0.2, 5}, {"abs(x)", 0.1, 3},
    {"-x", -3, 3},         {"x^3", -2, 2},        {"x^-2", 0.3, 3},    {"x^0.5", 0.2, 4},
    {"x/(1+x^2)", -3, 3},  {"x*sin(x)-x", -3, 3},
};

}  // namespace

TEST(ExprParse, SingleFunction) {
  const Expr e = parse("sech(q)", "q");
  const auto& u = as<Unary>(e);
  EXPECT_EQ(u.fn, Func::sech);
  EXPECT_TRUE(std::holds_alternative<Variable>(u.child.node().get()));
}

TEST(ExprParse, PrecedenceShape) {
  const Expr e = parse("x^2+1");
  const auto& add = as<Binary>(e);
  ASSERT_EQ(add.op, BinOp::add);
  const auto& pw = as<Binary>(add.left);
  EXPECT_EQ(pw.op, BinOp::pow);
  EXPECT_TRUE(std::holds_alternative<Variable>(pw.left.node().get()));
  EXPECT_EQ(as<Constant>(pw.right).value, 2.0);
  EXPECT_EQ(as<Constant>(add.right).value, 1.0);
}

TEST(ExprParse, PeriodicGeneratorAtZero) {
  const Expr e = parse("-4/(3*cos(q)^2-4)-5/4", "q");
  EXPECT_DOUBLE_EQ(eval(e, 0.0), 2.75);
}

TEST(ExprParse, UnaryMinusBindsBelowPower) {
  EXPECT_DOUBLE_EQ(eval(parse("-x^2"), 3.0), -9.0);
  EXPECT_DOUBLE_EQ(eval(parse("2^3^2"), 0.0), 512.0);
  EXPECT_DOUBLE_EQ(eval(parse(" 1 - 2 - 3 "), 0.0), -4.0);
  EXPECT_DOUBLE_EQ(eval(parse("8/2/2"), 0.0), 2.0);
}

TEST(ExprParse, Constants) {
  EXPECT_DOUBLE_EQ(eval(parse("pi"), 0.0), std::numbers::pi);
  EXPECT_DOUBLE_EQ(eval(parse("e"), 0.0), std::numbers::e);
  EXPECT_DOUBLE_EQ(eval(parse("1.5e-3"), 0.0), 1.5e-3);
}

TEST(ExprParse, SyntaxErrorCarriesOffset) {
  try {
    parse("x + * 2");
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& err) {
    EXPECT_EQ(err.offset(), 4u);
    EXPECT_FALSE(err.expected().empty());
    EXPECT_EQ(err.code(), ErrorCode::syntax);
  }
  EXPECT_THROW(parse(""), SyntaxError);
  EXPECT_THROW(parse("(x+1"), SyntaxError);
  EXPECT_THROW(parse("x^x"), SyntaxError);
  EXPECT_THROW(parse("x y"), SyntaxError);
}

TEST(ExprParse, UnknownIdentifiers) {
  EXPECT_THROW(parse("foo(x)"), UnknownFunction);
  EXPECT_THROW(parse("y + 1"), UnknownFunction);
  EXPECT_THROW(parse("q", "x"), UnknownFunction);
}

TEST(ExprEval, Examples) {
  const Dual2 s = eval_d2(parse("sech(x)"), 0.0);
  EXPECT_DOUBLE_EQ(s.v, 1.0);
  EXPECT_DOUBLE_EQ(s.d1, 0.0);
  EXPECT_DOUBLE_EQ(s.d2, -1.0);

  const Dual2 p = eval_d2(parse("x^2+1"), 1.0);
  EXPECT_EQ(p, (Dual2{2.0, 2.0, 2.0}));

  const Dual2 a = eval_d2(parse("arctan(x)"), 1.0);
  EXPECT_DOUBLE_EQ(a.v, std::numbers::pi / 4);
  EXPECT_DOUBLE_EQ(a.d1, 0.5);
  EXPECT_DOUBLE_EQ(a.d2, -0.5);
}

TEST(ExprEval, DomainErrors) {
  EXPECT_THROW(eval_d2(parse("ln(x)"), 0.0), DomainError);
  EXPECT_THROW(eval_d2(parse("sqrt(x)"), -1.0), DomainError);
  EXPECT_THROW(eval_d2(parse("1/x"), 0.0), DomainError);
  try {
    eval_d2(parse("1 + ln(x - 2)"), 1.0);
    FAIL() << "expected DomainError";
  } catch (const DomainError& err) {
    EXPECT_NE(std::string(err.what()).find("ln"), std::string::npos);
  }
}

TEST(ExprEval, DerivativesMatchFiniteDifferences) {
  std::mt19937_64 rng(11);
  for (const FnCase& c : kFunctions) {
    const Expr e = parse(c.text);
    const auto f = [&](double x) { return eval(e, x); };
    std::uniform_real_distribution<double> u(c.lo, c.hi);
    for (int k = 0; k < 100; ++k) {
      const double x = u(rng);
      const Dual2 d = eval_d2(e, x);
      EXPECT_EQ(d.v, f(x)) << c.text;
      EXPECT_LE(std::abs(d.d1 - oracle::fd1(f, x, 1e-5)) / std::max(1.0, std::abs(d.d1)), 1e-6)
          << c.text << " at " << x;
      EXPECT_LE(std::abs(d.d2 - oracle::fd2(f, x, 1e-4)) / std::max(1.0, std::abs(d.d2)), 1e-4)
          << c.text << " at " << x;
    }
  }
}

TEST(ExprEval, SymbolicDerivativeAgreesWithAD) {
  std::mt19937_64 rng(5);
  for (const FnCase& c : kFunctions) {
    const Expr e = parse(c.text);
    const Expr de = differentiate(e);
    std::uniform_real_distribution<double> u(c.lo, c.hi);
    for (int k = 0; k < 20; ++k) {
      const double x = u(rng);
      const Dual2 d = eval_d2(e, x);
      const Dual2 dd = eval_d2(de, x);
      EXPECT_NEAR(dd.v, d.d1, 1e-10 * std::max(1.0, std::abs(d.d1))) << c.text;
      EXPECT_NEAR(dd.d1, d.d2, 1e-9 * std::max(1.0, std::abs(d.d2))) << c.text;
    }
  }
}

TEST(ExprEval, DeterministicBitwise) {
  const Expr e = parse("sech(x)^2*tanh(x) + sqrt(1+x^2)");
  for (double x : {-2.3, 0.0, 0.7, 4.1}) {
    const Dual2 a = eval_d2(e, x);
    const Dual2 b = eval_d2(e, x);
    EXPECT_EQ(a, b);
  }
}

TEST(ExprPrint, RoundTripCorpus) {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int k = 0; k < 1200; ++k) {
    const std::string text = oracle::random_expr_text(rng, k % 2 ? "x" : "q", 4);
    const std::string var = k % 2 ? "x" : "q";
    const Expr e = parse(text, var);
    const std::string printed = print(e, var);
    const Expr back = parse(printed, var);
    ASSERT_TRUE(structurally_equal(e, back)) << text << " -> " << printed;
    EXPECT_EQ(print(back, var), printed);
    ++checked;
  }
  EXPECT_GE(checked, 1000);
}

TEST(ExprPrint, BuiltTreesRoundTrip) {
  const Expr e = literal(-2.5) * unary(Func::sech, variable()) + power(variable(), -1.5);
  EXPECT_TRUE(structurally_equal(parse(print(e)), e));
  EXPECT_EQ(size(parse("x+1")), 3u);
}
