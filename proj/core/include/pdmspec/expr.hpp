#pragma once

// One-variable real expressions: parsing, printing, evaluation with exact
// first and second derivatives, and symbolic differentiation.
//
// Grammar (whitespace-insensitive):
//
//   expr    := term (("+" | "-") term)*
//   term    := unary (("*" | "/") unary)*
//   unary   := "-" unary | power
//   power   := base ("^" ["-" | "+"] number)?
//   base    := number | "pi" | "e" | var | func "(" expr ")" | "(" expr ")"
//
// so "^" binds tighter than unary minus ("-x^2" is -(x^2)) and is
// right-associative through its restricted, constant exponent.

#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "pdmspec/dual.hpp"

namespace pdmspec::expr {

enum class Func {
  neg,
  exp,
  ln,
  sin,
  cos,
  tan,
  sinh,
  cosh,
  tanh,
  sech,
  arctan,
  sqrt,
  abs,
};

enum class BinOp { add, sub, mul, div, pow };

/// Name used by the parser and printer; "-" for negation.
std::string_view name_of(Func f);
std::string_view symbol_of(BinOp op);

class Node;

/// Immutable handle to an expression tree. Copies share structure.
class Expr {
 public:
  Expr() = default;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  const Node& node() const { return *node_; }
  bool empty() const { return node_ == nullptr; }

 private:
  std::shared_ptr<const Node> node_;
};

struct Constant {
  double value;
};
struct Variable {};
struct Unary {
  Func fn;
  Expr child;
};
struct Binary {
  BinOp op;
  Expr left;
  Expr right;
};

class Node {
 public:
  using Variant = std::variant<Constant, Variable, Unary, Binary>;

  explicit Node(Variant v) : v_(std::move(v)) {}
  const Variant& get() const { return v_; }

 private:
  Variant v_;
};

// Builders. `literal` produces neg(constant) for negative values so that
// built trees survive a print/parse round trip unchanged.
Expr constant(double value);
Expr literal(double value);
Expr variable();
Expr unary(Func fn, Expr child);
Expr binary(BinOp op, Expr left, Expr right);
/// Raises to a constant exponent; the only form of "^" the AST admits.
Expr power(Expr base, double exponent);

Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator*(Expr a, Expr b);
Expr operator/(Expr a, Expr b);
Expr operator-(Expr a);

/// Parses `text`; `var` is the single admissible variable name.
/// Throws SyntaxError or UnknownFunction.
Expr parse(std::string_view text, std::string_view var = "x");

/// Fully parenthesized text form that parses back to an identical tree.
std::string print(const Expr& e, std::string_view var = "x");

bool structurally_equal(const Expr& a, const Expr& b);

/// Number of nodes in the tree.
std::size_t size(const Expr& e);

double eval(const Expr& e, double x);

/// Value, first and second derivative at x. Throws DomainError naming the
/// offending subexpression when a node leaves its natural domain.
Dual2 eval_d2(const Expr& e, double x);

/// Symbolic derivative; no simplification beyond dropping zero/unit factors.
Expr differentiate(const Expr& e);

}  // namespace pdmspec::expr
