#pragma once

#include <complex>
#include <functional>
#include <optional>

#include <Eigen/Dense>

#include "pdmspec/maps.hpp"
#include "pdmspec/potentials.hpp"

namespace pdmspec::discretize {

using cplx = std::complex<double>;

/// Uniform Dirichlet grid on [a, b] with N interior nodes x_i = a + i h,
/// i = 1..N, h = (b - a) / (N + 1).
class GridSpec {
 public:
  /// Throws BadParams unless a < b are finite and N >= 16.
  GridSpec(double a, double b, int N);

  double a() const { return a_; }
  double b() const { return b_; }
  int N() const { return N_; }
  double h() const { return (b_ - a_) / (N_ + 1); }
  /// Node k, 0-based: a + (k + 1) h.
  double node(int k) const { return a_ + (k + 1) * h(); }
  Eigen::VectorXd nodes() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  double a_;
  double b_;
  int N_;
};

enum class OperatorKind { H_target, H_reference, eta1, eta2, derived };

const char* to_string(OperatorKind kind) noexcept;

struct OperatorMatrix {
  Eigen::MatrixXcd A;
  OperatorKind kind;
  GridSpec grid;

  int N() const { return static_cast<int>(A.rows()); }
};

/// -(phi_{i+1} - 2 phi_i + phi_{i-1}) / h^2 + V(q_i) phi_i.
OperatorMatrix assemble_reference(const potentials::ComplexPotential& pot, const GridSpec& grid);

/// -mu^2 psi'' - 2 mu mu' psi' + V psi with central differences.
OperatorMatrix assemble_target(const maps::MassProfile& p,
                               const potentials::ComplexPotential& pot, const GridSpec& grid);

/// -i [mu psi' + G1 psi] + F psi with G1 = mu'/2 unless overridden.
OperatorMatrix assemble_eta1(const maps::MassProfile& p, const std::function<double(double)>& F,
                             const GridSpec& grid,
                             const std::optional<std::function<double(double)>>& G1 = std::nullopt);

/// i * eta1, entrywise.
OperatorMatrix assemble_eta2(const maps::MassProfile& p, const std::function<double(double)>& F,
                             const GridSpec& grid,
                             const std::optional<std::function<double(double)>>& G1 = std::nullopt);

/// i * A with the exact (re, im) -> (-im, re) map.
OperatorMatrix times_i(const OperatorMatrix& m);

OperatorMatrix adjoint(const OperatorMatrix& m);

/// A * B; throws GridMismatch if the grids differ.
OperatorMatrix product(const OperatorMatrix& lhs, const OperatorMatrix& rhs);

void require_same_grid(const OperatorMatrix& lhs, const OperatorMatrix& rhs);

}  // namespace pdmspec::discretize
