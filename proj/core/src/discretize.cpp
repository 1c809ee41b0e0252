#include "pdmspec/discretize.hpp"

#include <cmath>
#include <sstream>

#include "pdmspec/error.hpp"

namespace pdmspec::discretize {

namespace {

void check_node(const cplx& v, double x, const char* what) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    std::ostringstream msg;
    msg << what << " not finite at grid node " << x;
    throw DomainError(msg.str());
  }
}

void check_inside(const Interval& dom, const GridSpec& grid) {
  if (!dom.contains(grid.node(0)) || !dom.contains(grid.node(grid.N() - 1))) {
    std::ostringstream msg;
    msg << "grid [" << grid.a() << ", " << grid.b() << "] leaves the operator domain";
    throw DomainError(msg.str());
  }
}

}  // namespace

GridSpec::GridSpec(double a, double b, int N) : a_(a), b_(b), N_(N) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
    throw BadParams("grid needs finite ends with a < b");
  if (N < 16) throw BadParams("grid needs at least 16 interior points");
}

Eigen::VectorXd GridSpec::nodes() const {
  Eigen::VectorXd x(N_);
  for (int k = 0; k < N_; ++k) x[k] = node(k);
  return x;
}

const char* to_string(OperatorKind kind) noexcept {
  switch (kind) {
    case OperatorKind::H_target: return "H_target";
    case OperatorKind::H_reference: return "H_reference";
    case OperatorKind::eta1: return "eta1";
    case OperatorKind::eta2: return "eta2";
    case OperatorKind::derived: return "derived";
  }
  return "unknown";
}

OperatorMatrix assemble_reference(const potentials::ComplexPotential& pot, const GridSpec& grid) {
  if (pot.var() != potentials::Var::q)
    throw BadParams("reference operator expects a potential in q");
  check_inside(pot.domain(), grid);
  const int n = grid.N();
  const double h = grid.h();
  const double off = -1.0 / (h * h);
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double q = grid.node(i);
    const cplx v = pot(q);
    check_node(v, q, "reference potential");
    A(i, i) = 2.0 / (h * h) + v;
    if (i > 0) A(i, i - 1) = off;
    if (i + 1 < n) A(i, i + 1) = off;
  }
  return {std::move(A), OperatorKind::H_reference, grid};
}

OperatorMatrix assemble_target(const maps::MassProfile& p,
                               const potentials::ComplexPotential& pot, const GridSpec& grid) {
  if (pot.var() != potentials::Var::x)
    throw BadParams("target operator expects a potential in x");
  check_inside(pot.domain(), grid);
  check_inside(p.domain(), grid);
  const int n = grid.N();
  const double h = grid.h();
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double x = grid.node(i);
    const Dual2 mu = p.mu_d2(x);
    const cplx v = pot(x);
    check_node(v, x, "target potential");
    const double kin = mu.v * mu.v / (h * h);
    const double drift = mu.v * mu.d1 / h;
    A(i, i) = 2.0 * kin + v;
    if (i > 0) A(i, i - 1) = -kin + drift;
    if (i + 1 < n) A(i, i + 1) = -kin - drift;
  }
  return {std::move(A), OperatorKind::H_target, grid};
}

OperatorMatrix assemble_eta1(const maps::MassProfile& p, const std::function<double(double)>& F,
                             const GridSpec& grid,
                             const std::optional<std::function<double(double)>>& G1) {
  check_inside(p.domain(), grid);
  const int n = grid.N();
  const double h = grid.h();
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double x = grid.node(i);
    const Dual2 mu = p.mu_d2(x);
    const double g1 = G1 ? (*G1)(x) : 0.5 * mu.d1;
    const cplx d = cplx(F(x), -g1);
    check_node(d, x, "eta1 diagonal");
    A(i, i) = d;
    const double c = mu.v / (2.0 * h);
    if (i > 0) A(i, i - 1) = cplx(0.0, c);
    if (i + 1 < n) A(i, i + 1) = cplx(0.0, -c);
  }
  return {std::move(A), OperatorKind::eta1, grid};
}

OperatorMatrix assemble_eta2(const maps::MassProfile& p, const std::function<double(double)>& F,
                             const GridSpec& grid,
                             const std::optional<std::function<double(double)>>& G1) {
  OperatorMatrix m = times_i(assemble_eta1(p, F, grid, G1));
  m.kind = OperatorKind::eta2;
  return m;
}

OperatorMatrix times_i(const OperatorMatrix& m) {
  OperatorMatrix out = m;
  out.A = m.A.unaryExpr([](const cplx& z) { return cplx(-z.imag(), z.real()); });
  out.kind = OperatorKind::derived;
  return out;
}

OperatorMatrix adjoint(const OperatorMatrix& m) {
  OperatorMatrix out{m.A.adjoint(), m.kind, m.grid};
  return out;
}

void require_same_grid(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
  if (!(lhs.grid == rhs.grid) || lhs.N() != rhs.N())
    throw GridMismatch("operators live on different grids");
}

OperatorMatrix product(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
  require_same_grid(lhs, rhs);
  return {lhs.A * rhs.A, OperatorKind::derived, lhs.grid};
}

}  // namespace pdmspec::discretize
