#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pdmspec/discretize.hpp"
#include "pdmspec/eig.hpp"

namespace pdmspec::verify {

using cplx = std::complex<double>;
using discretize::GridSpec;
using discretize::OperatorMatrix;

struct Match {
  cplx a;
  cplx b;
  double dist = 0.0;
};

struct VerificationReport {
  std::string check;
  /// One defect per grid, coarsest first.
  std::vector<double> defects;
  std::vector<int> grids;
  /// defects[i] / defects[i + 1].
  std::vector<double> ratios;
  double tolerance = 0.0;
  bool pass = false;
  /// Set by ladder checks that extrapolate to h -> 0.
  double extrapolated = std::numeric_limits<double>::quiet_NaN();
  std::vector<Match> matches;
  std::string detail;

  double finest() const {
    return defects.empty() ? std::numeric_limits<double>::quiet_NaN() : defects.back();
  }
};

/// whole: Frobenius norms of the full matrices. probe: the same quotient
/// restricted to K smooth probe functions, which measures the operator
/// identity on resolved functions rather than the grid-scale stencil
/// commutators.
enum class DefectScope { probe, whole };

const char* to_string(DefectScope s) noexcept;

/// Orthonormal N x K basis of bump-windowed sines
/// exp(1 - 1/(1 - s^2)) sin(k pi t), t = (x - a)/(b - a), s = 2t - 1.
Eigen::MatrixXcd probe_basis(const GridSpec& grid, int K = 4);

/// ||eta H - H^dagger eta|| / (||eta|| ||H||); throws GridMismatch.
double intertwining_defect(const OperatorMatrix& eta, const OperatorMatrix& H,
                           DefectScope scope = DefectScope::whole, int K = 4);

/// ||A - A^dagger||_F / ||A||_F.
double hermiticity_defect(const OperatorMatrix& A);
double hermiticity_defect(const Eigen::MatrixXcd& A);
/// ||A + A^dagger||_F / ||A||_F.
double anti_hermiticity_defect(const OperatorMatrix& A);
double anti_hermiticity_defect(const Eigen::MatrixXcd& A);

/// (Anti-)Hermiticity defect of the product eta H; in probe scope of the
/// compression P^dagger eta H P.
double product_hermiticity_defect(const OperatorMatrix& eta, const OperatorMatrix& H,
                                  bool anti = false, DefectScope scope = DefectScope::probe,
                                  int K = 4);

struct PseudoNorm {
  cplx value;
  /// |value| < 1e-8: the reality argument gives no information.
  bool undetermined = false;
};

/// v^dagger (eta v) for each vector.
std::vector<PseudoNorm> pseudo_norms(const OperatorMatrix& eta,
                                     const std::vector<Eigen::VectorXcd>& vectors);

/// Pass iff every bound eigenvalue has |Im| <= tol; defect = max |Im|.
VerificationReport reality_check(const eig::SpectrumReport& rep, double tol = 1e-6);

/// Reality over refinement N, 2N, 4N, ... Bound levels of the finest grid
/// are tracked to coarser grids by nearest value. A level passes if its
/// finest |Im| <= tol, or if |Im| decreases monotonically and its Aitken
/// extrapolation to h -> 0 is below max(tol, 0.1 |Im_finest|).
VerificationReport reality_ladder(const std::vector<eig::SpectrumReport>& reps,
                                  double tol = 1e-6);

/// Greedy nearest-pair matching, ties broken by ascending real part.
/// Pass iff counts agree and every pair is within tol.
VerificationReport isospectral_compare(const std::vector<cplx>& a, const std::vector<cplx>& b,
                                       double tol);
VerificationReport isospectral_compare(const eig::SpectrumReport& a,
                                       const eig::SpectrumReport& b, double tol);

std::vector<double> richardson_ratios(const std::vector<double>& defects);

/// True if every ratio lies within target * (1 +- band).
bool ratios_within(const std::vector<double>& ratios, double target = 4.0, double band = 0.2);

struct OperatorPair {
  OperatorMatrix eta;
  OperatorMatrix H;
};

/// Intertwining defects over the grid sizes in Ns; pass iff the finest
/// defect is <= tol. Ratios are attached for order checks.
VerificationReport intertwining_ladder(const std::function<OperatorPair(int)>& build,
                                       const std::vector<int>& Ns,
                                       DefectScope scope = DefectScope::whole, double tol = 1e-3,
                                       int K = 4);

}  // namespace pdmspec::verify
