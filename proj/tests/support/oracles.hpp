#pragma once
// Independent reference computations used only by the tests.

#include <complex>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pdmspec::oracle {

using cplx = std::complex<double>;

/// Monic characteristic polynomial det(lambda I - A), coefficients from the
/// constant term up, by the Faddeev-LeVerrier recursion.
std::vector<cplx> char_poly(const Eigen::MatrixXcd& A);

/// All roots of a monic polynomial by Durand-Kerner iteration followed by
/// Newton polishing.
std::vector<cplx> poly_roots(const std::vector<cplx>& monic);

/// Largest distance in a greedy nearest matching of two multisets of equal
/// size.
double multiset_distance(std::vector<cplx> a, std::vector<cplx> b);

/// Central first difference and three-point second difference.
double fd1(const std::function<double(double)>& f, double x, double h);
double fd2(const std::function<double(double)>& f, double x, double h);

/// Five-point second difference, O(h^4).
cplx fd2_5(const std::function<cplx(double)>& f, double x, double h);

/// Random expression text over var, using every built-in function and
/// operator. The result parses; it is not guaranteed to evaluate.
std::string random_expr_text(std::mt19937_64& rng, const std::string& var, int depth);

Eigen::MatrixXcd random_complex(std::mt19937_64& rng, int n);
Eigen::MatrixXcd random_hermitian(std::mt19937_64& rng, int n);

}  // namespace pdmspec::oracle
