#include "pdmspec/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <utility>

#include "pdmspec/error.hpp"

namespace pdmspec::expr {

namespace {

constexpr std::array<std::pair<std::string_view, Func>, 12> kFunctions{{
    {"exp", Func::exp},
    {"ln", Func::ln},
    {"sin", Func::sin},
    {"cos", Func::cos},
    {"tan", Func::tan},
    {"sinh", Func::sinh},
    {"cosh", Func::cosh},
    {"tanh", Func::tanh},
    {"sech", Func::sech},
    {"arctan", Func::arctan},
    {"sqrt", Func::sqrt},
    {"abs", Func::abs},
}};

std::optional<Func> lookup_function(std::string_view name) {
  for (const auto& [n, f] : kFunctions)
    if (n == name) return f;
  return std::nullopt;
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

bool is_constant(const Expr& e, double value) {
  const auto* c = std::get_if<Constant>(&e.node().get());
  return c != nullptr && c->value == value;
}

bool contains_variable(const Expr& e) {
  return std::visit(
      [](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Variable>) return true;
        if constexpr (std::is_same_v<T, Constant>) return false;
        if constexpr (std::is_same_v<T, Unary>) return contains_variable(n.child);
        if constexpr (std::is_same_v<T, Binary>)
          return contains_variable(n.left) || contains_variable(n.right);
      },
      e.node().get());
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  Parser(std::string_view text, std::string_view var) : text_(text), var_(var) {}

  Expr run() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expression");
    Expr e = parse_expr();
    skip_ws();
    if (pos_ < text_.size()) fail("operator or end of input");
    return e;
  }

 private:
  [[noreturn]] void fail(std::string expected) const {
    throw SyntaxError(pos_, std::move(expected), std::string(text_));
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("'") + c + "'");
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      if (accept('+'))
        lhs = binary(BinOp::add, lhs, parse_term());
      else if (accept('-'))
        lhs = binary(BinOp::sub, lhs, parse_term());
      else
        return lhs;
    }
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*'))
        lhs = binary(BinOp::mul, lhs, parse_unary());
      else if (accept('/'))
        lhs = binary(BinOp::div, lhs, parse_unary());
      else
        return lhs;
    }
  }

  Expr parse_unary() {
    if (accept('-')) return unary(Func::neg, parse_unary());
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_base();
    if (accept('^')) return power(base, parse_exponent());
    return base;
  }

  // Constant exponent: signed literal or a variable-free parenthesized
  // expression, optionally followed by a further "^" (right-associative).
  double parse_exponent() {
    skip_ws();
    double value = 0.0;
    if (accept('(')) {
      const std::size_t start = pos_;
      Expr inner = parse_expr();
      expect(')');
      if (contains_variable(inner)) {
        pos_ = start;
        fail("constant exponent");
      }
      value = eval(inner, 0.0);
    } else {
      double sign = 1.0;
      if (accept('-'))
        sign = -1.0;
      else
        accept('+');
      skip_ws();
      auto num = lex_number();
      if (!num) fail("number");
      value = sign * *num;
    }
    if (accept('^')) value = std::pow(value, parse_exponent());
    return value;
  }

  std::optional<double> lex_number() {
    const std::size_t start = pos_;
    auto digit = [&](std::size_t i) {
      return i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]));
    };
    std::size_t i = pos_;
    bool digits = false;
    while (digit(i)) ++i, digits = true;
    if (i < text_.size() && text_[i] == '.') {
      ++i;
      while (digit(i)) ++i, digits = true;
    }
    if (!digits) return std::nullopt;
    if (i < text_.size() && (text_[i] == 'e' || text_[i] == 'E')) {
      std::size_t j = i + 1;
      if (j < text_.size() && (text_[j] == '+' || text_[j] == '-')) ++j;
      if (digit(j)) {
        i = j;
        while (digit(i)) ++i;
      }
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + i, value);
    if (ec != std::errc() || ptr != text_.data() + i) {
      pos_ = start;
      fail("number");
    }
    pos_ = i;
    return value;
  }

  Expr parse_base() {
    skip_ws();
    if (pos_ >= text_.size()) fail("operand");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      auto num = lex_number();
      if (!num) fail("number");
      return constant(*num);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string_view ident = text_.substr(start, pos_ - start);
      if (ident == var_) return variable();
      if (ident == "pi") return constant(std::numbers::pi);
      if (ident == "e") return constant(std::numbers::e);
      if (auto fn = lookup_function(ident)) {
        expect('(');
        Expr arg = parse_expr();
        expect(')');
        return unary(*fn, arg);
      }
      std::ostringstream msg;
      msg << "unknown identifier '" << ident << "' at offset " << start;
      throw UnknownFunction(msg.str());
    }
    fail("operand");
  }

  std::string_view text_;
  std::string_view var_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Evaluation

[[noreturn]] void domain_fail(const Expr& sub, double x, const char* what) {
  std::ostringstream msg;
  msg << what << " in '" << print(sub) << "' at x = " << format_number(x);
  throw DomainError(msg.str());
}

double eval_value(const Expr& e, double x) {
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, Variable>) {
          return x;
        } else if constexpr (std::is_same_v<T, Unary>) {
          const double u = eval_value(n.child, x);
          double r = 0.0;
          switch (n.fn) {
            case Func::neg: r = -u; break;
            case Func::exp: r = std::exp(u); break;
            case Func::ln:
              if (!(u > 0.0)) domain_fail(e, x, "logarithm of nonpositive value");
              r = std::log(u);
              break;
            case Func::sin: r = std::sin(u); break;
            case Func::cos: r = std::cos(u); break;
            case Func::tan: r = std::tan(u); break;
            case Func::sinh: r = std::sinh(u); break;
            case Func::cosh: r = std::cosh(u); break;
            case Func::tanh: r = std::tanh(u); break;
            case Func::sech: r = 1.0 / std::cosh(u); break;
            case Func::arctan: r = std::atan(u); break;
            case Func::sqrt:
              if (u < 0.0) domain_fail(e, x, "square root of negative value");
              r = std::sqrt(u);
              break;
            case Func::abs: r = std::abs(u); break;
          }
          if (!std::isfinite(r)) domain_fail(e, x, "non-finite result");
          return r;
        } else {
          const double a = eval_value(n.left, x);
          const double b = eval_value(n.right, x);
          double r = 0.0;
          switch (n.op) {
            case BinOp::add: r = a + b; break;
            case BinOp::sub: r = a - b; break;
            case BinOp::mul: r = a * b; break;
            case BinOp::div:
              if (b == 0.0) domain_fail(e, x, "division by zero");
              r = a / b;
              break;
            case BinOp::pow:
              if (a < 0.0 && b != std::trunc(b))
                domain_fail(e, x, "fractional power of negative value");
              r = std::pow(a, b);
              break;
          }
          if (!std::isfinite(r)) domain_fail(e, x, "non-finite result");
          return r;
        }
      },
      e.node().get());
}

Dual2 eval_dual(const Expr& e, double x) {
  Dual2 r = std::visit(
      [&](const auto& n) -> Dual2 {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return Dual2::constant(n.value);
        } else if constexpr (std::is_same_v<T, Variable>) {
          return Dual2::seed(x);
        } else if constexpr (std::is_same_v<T, Unary>) {
          const Dual2 u = eval_dual(n.child, x);
          switch (n.fn) {
            case Func::neg: return -u;
            case Func::exp: return exp(u);
            case Func::ln:
              if (!(u.v > 0.0)) domain_fail(e, x, "logarithm of nonpositive value");
              return log(u);
            case Func::sin: return sin(u);
            case Func::cos: return cos(u);
            case Func::tan: return tan(u);
            case Func::sinh: return sinh(u);
            case Func::cosh: return cosh(u);
            case Func::tanh: return tanh(u);
            case Func::sech: return sech(u);
            case Func::arctan: return atan(u);
            case Func::sqrt:
              if (!(u.v > 0.0)) domain_fail(e, x, "square root at or below zero");
              return sqrt(u);
            case Func::abs: return abs(u);
          }
          return u;
        } else {
          const Dual2 a = eval_dual(n.left, x);
          if (n.op == BinOp::pow) {
            const double c = std::get<Constant>(n.right.node().get()).value;
            if (a.v < 0.0 && c != std::trunc(c))
              domain_fail(e, x, "fractional power of negative value");
            return pow(a, c);
          }
          const Dual2 b = eval_dual(n.right, x);
          switch (n.op) {
            case BinOp::add: return a + b;
            case BinOp::sub: return a - b;
            case BinOp::mul: return a * b;
            case BinOp::div:
              if (b.v == 0.0) domain_fail(e, x, "division by zero");
              return a / b;
            case BinOp::pow: break;
          }
          return a;
        }
      },
      e.node().get());
  if (!r.finite()) domain_fail(e, x, "non-finite value or derivative");
  return r;
}

void print_to(std::string& out, const Expr& e, std::string_view var) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Constant>) {
          if (n.value < 0.0 || std::signbit(n.value)) {
            out += "(";
            out += format_number(n.value);
            out += ")";
          } else {
            out += format_number(n.value);
          }
        } else if constexpr (std::is_same_v<T, Variable>) {
          out += var;
        } else if constexpr (std::is_same_v<T, Unary>) {
          if (n.fn == Func::neg) {
            out += "(-";
            print_to(out, n.child, var);
            out += ")";
          } else {
            out += name_of(n.fn);
            out += "(";
            print_to(out, n.child, var);
            out += ")";
          }
        } else {
          out += "(";
          print_to(out, n.left, var);
          out += symbol_of(n.op);
          if (n.op == BinOp::pow)
            out += format_number(std::get<Constant>(n.right.node().get()).value);
          else
            print_to(out, n.right, var);
          out += ")";
        }
      },
      e.node().get());
}

// Lightly simplifying builders used by differentiate().
Expr s_add(Expr a, Expr b) {
  if (is_constant(a, 0.0)) return b;
  if (is_constant(b, 0.0)) return a;
  return a + b;
}

Expr s_sub(Expr a, Expr b) {
  if (is_constant(b, 0.0)) return a;
  if (is_constant(a, 0.0)) return -b;
  return a - b;
}

Expr s_mul(Expr a, Expr b) {
  if (is_constant(a, 0.0) || is_constant(b, 0.0)) return constant(0.0);
  if (is_constant(a, 1.0)) return b;
  if (is_constant(b, 1.0)) return a;
  return a * b;
}

Expr s_div(Expr a, Expr b) {
  if (is_constant(a, 0.0)) return constant(0.0);
  if (is_constant(b, 1.0)) return a;
  return a / b;
}

Expr s_neg(Expr a) {
  if (is_constant(a, 0.0)) return a;
  return -a;
}

}  // namespace

std::string_view name_of(Func f) {
  if (f == Func::neg) return "-";
  for (const auto& [n, fn] : kFunctions)
    if (fn == f) return n;
  return "?";
}

std::string_view symbol_of(BinOp op) {
  switch (op) {
    case BinOp::add: return "+";
    case BinOp::sub: return "-";
    case BinOp::mul: return "*";
    case BinOp::div: return "/";
    case BinOp::pow: return "^";
  }
  return "?";
}

Expr constant(double value) {
  return Expr(std::make_shared<const Node>(Constant{value}));
}

Expr literal(double value) {
  if (value == 0.0) return constant(0.0);
  if (value < 0.0) return unary(Func::neg, constant(-value));
  return constant(value);
}

Expr variable() { return Expr(std::make_shared<const Node>(Variable{})); }

Expr unary(Func fn, Expr child) {
  return Expr(std::make_shared<const Node>(Unary{fn, std::move(child)}));
}

Expr binary(BinOp op, Expr left, Expr right) {
  if (op == BinOp::pow && !std::holds_alternative<Constant>(right.node().get()))
    throw BadParams("exponent of '^' must be a constant");
  return Expr(std::make_shared<const Node>(Binary{op, std::move(left), std::move(right)}));
}

Expr power(Expr base, double exponent) {
  return binary(BinOp::pow, std::move(base), constant(exponent));
}

Expr operator+(Expr a, Expr b) { return binary(BinOp::add, std::move(a), std::move(b)); }
Expr operator-(Expr a, Expr b) { return binary(BinOp::sub, std::move(a), std::move(b)); }
Expr operator*(Expr a, Expr b) { return binary(BinOp::mul, std::move(a), std::move(b)); }
Expr operator/(Expr a, Expr b) { return binary(BinOp::div, std::move(a), std::move(b)); }
Expr operator-(Expr a) { return unary(Func::neg, std::move(a)); }

Expr parse(std::string_view text, std::string_view var) {
  return Parser(text, var).run();
}

std::string print(const Expr& e, std::string_view var) {
  std::string out;
  print_to(out, e, var);
  return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  const auto& va = a.node().get();
  const auto& vb = b.node().get();
  if (va.index() != vb.index()) return false;
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        const auto& m = std::get<T>(vb);
        if constexpr (std::is_same_v<T, Constant>) {
          return n.value == m.value && std::signbit(n.value) == std::signbit(m.value);
        } else if constexpr (std::is_same_v<T, Variable>) {
          return true;
        } else if constexpr (std::is_same_v<T, Unary>) {
          return n.fn == m.fn && structurally_equal(n.child, m.child);
        } else {
          return n.op == m.op && structurally_equal(n.left, m.left) &&
                 structurally_equal(n.right, m.right);
        }
      },
      va);
}

std::size_t size(const Expr& e) {
  return std::visit(
      [](const auto& n) -> std::size_t {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Unary>) return 1 + size(n.child);
        if constexpr (std::is_same_v<T, Binary>) return 1 + size(n.left) + size(n.right);
        return 1;
      },
      e.node().get());
}

double eval(const Expr& e, double x) { return eval_value(e, x); }

Dual2 eval_d2(const Expr& e, double x) { return eval_dual(e, x); }

Expr differentiate(const Expr& e) {
  return std::visit(
      [&](const auto& n) -> Expr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return constant(0.0);
        } else if constexpr (std::is_same_v<T, Variable>) {
          return constant(1.0);
        } else if constexpr (std::is_same_v<T, Unary>) {
          const Expr& u = n.child;
          const Expr du = differentiate(u);
          if (is_constant(du, 0.0)) return constant(0.0);
          switch (n.fn) {
            case Func::neg: return s_neg(du);
            case Func::exp: return s_mul(e, du);
            case Func::ln: return s_div(du, u);
            case Func::sin: return s_mul(unary(Func::cos, u), du);
            case Func::cos: return s_neg(s_mul(unary(Func::sin, u), du));
            case Func::tan: return s_div(du, power(unary(Func::cos, u), 2.0));
            case Func::sinh: return s_mul(unary(Func::cosh, u), du);
            case Func::cosh: return s_mul(unary(Func::sinh, u), du);
            case Func::tanh: return s_mul(power(unary(Func::sech, u), 2.0), du);
            case Func::sech:
              return s_neg(s_mul(s_mul(e, unary(Func::tanh, u)), du));
            case Func::arctan:
              return s_div(du, constant(1.0) + power(u, 2.0));
            case Func::sqrt: return s_div(du, constant(2.0) * e);
            case Func::abs: return s_mul(du, s_div(u, e));
          }
          return constant(0.0);
        } else {
          const Expr& a = n.left;
          const Expr& b = n.right;
          const Expr da = differentiate(a);
          if (n.op == BinOp::pow) {
            const double c = std::get<Constant>(b.node().get()).value;
            if (c == 0.0) return constant(0.0);
            const Expr base_term = (c == 1.0) ? constant(1.0) : (c == 2.0 ? a : power(a, c - 1.0));
            return s_mul(s_mul(literal(c), base_term), da);
          }
          const Expr db = differentiate(b);
          switch (n.op) {
            case BinOp::add: return s_add(da, db);
            case BinOp::sub: return s_sub(da, db);
            case BinOp::mul: return s_add(s_mul(da, b), s_mul(a, db));
            case BinOp::div:
              return s_div(s_sub(s_mul(da, b), s_mul(a, db)), power(b, 2.0));
            case BinOp::pow: break;
          }
          return constant(0.0);
        }
      },
      e.node().get());
}

}  // namespace pdmspec::expr
