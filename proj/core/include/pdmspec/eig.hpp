#pragma once

#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "pdmspec/discretize.hpp"

namespace pdmspec::eig {

using cplx = std::complex<double>;

struct QRStats {
  long iterations = 0;
  int deflations = 0;
};

/// Balancing, Householder reduction to upper Hessenberg form and complex
/// single-shift QR with deflation. The reduction is kept so that several
/// eigenvectors can be extracted by inverse iteration at O(N^2) each.
class DenseEigensolver {
 public:
  explicit DenseEigensolver(const Eigen::MatrixXcd& A);

  /// All eigenvalues ordered by (Re, Im). Throws NoConvergence if an
  /// eigenvalue needs more than 100 sweeps after the last deflation.
  std::vector<cplx> eigenvalues(QRStats* stats = nullptr) const;

  /// Inverse iteration with shift lambda + jitter; unit 2-norm result.
  /// Throws SingularShift after three jittered retries.
  Eigen::VectorXcd eigenvector(cplx lambda, double* residual = nullptr) const;

  const Eigen::MatrixXcd& matrix() const { return A_; }
  const Eigen::MatrixXcd& hessenberg() const { return H_; }
  const Eigen::VectorXd& balance_scales() const { return scale_; }

 private:
  void apply_q(Eigen::VectorXcd& v) const;

  Eigen::MatrixXcd A_;
  Eigen::VectorXd scale_;
  Eigen::MatrixXcd H_;
  std::vector<Eigen::VectorXcd> reflectors_;
  double norm_a_ = 0.0;
  double norm_h_ = 0.0;
};

std::vector<cplx> spectrum(const Eigen::MatrixXcd& A, QRStats* stats = nullptr);
std::vector<cplx> spectrum(const discretize::OperatorMatrix& m, QRStats* stats = nullptr);

Eigen::VectorXcd eigenvector(const discretize::OperatorMatrix& m, cplx lambda,
                             double* residual = nullptr);

/// ||A v - lambda v||_2 / (||A||_F ||v||_2).
double eigen_residual(const Eigen::MatrixXcd& A, cplx lambda, const Eigen::VectorXcd& v);

/// max(|v_1|, |v_N|) / max_i |v_i|.
double boundary_amplitude_ratio(const Eigen::VectorXcd& v);

/// open: candidates lie below the boundary floor of the potential and must
/// decay towards the walls. hard_wall: the Dirichlet walls are physical, so
/// every computed eigenpair is a bound state of the box.
enum class Confinement { open, hard_wall };

const char* to_string(Confinement c) noexcept;

struct EigenEntry {
  cplx value;
  double residual = std::numeric_limits<double>::quiet_NaN();
  double boundary_ratio = std::numeric_limits<double>::quiet_NaN();
  bool candidate = false;
  bool is_bound = false;
  Eigen::VectorXcd vector;

  bool has_vector() const { return vector.size() > 0; }
};

struct SpectrumReport {
  std::vector<EigenEntry> entries;
  QRStats stats;
  Confinement confinement = Confinement::open;
  double floor = 0.0;
  int N = 0;

  std::vector<cplx> eigenvalues() const;
  std::vector<cplx> bound_values() const;
  std::vector<const EigenEntry*> bound_entries() const;
  int bound_count() const;
};

struct AnalyzeOptions {
  Confinement confinement = Confinement::open;
  /// Re(lambda) threshold for open confinement, usually boundary_floor.
  double floor = 0.0;
  double ratio_tol = 1e-4;
  /// Eigenvectors are computed for at most this many candidates, lowest
  /// real part first.
  int max_vectors = 64;
};

SpectrumReport analyze(const discretize::OperatorMatrix& m, const AnalyzeOptions& opts);

/// Recomputes is_bound: open mode needs a candidate whose boundary ratio is
/// below ratio_tol; hard_wall mode needs a candidate with a vector.
SpectrumReport bound_filter(const SpectrumReport& rep, double ratio_tol = 1e-4);

/// Keeps the bound flag only on the K bound states of lowest real part.
SpectrumReport lowest_bound(const SpectrumReport& rep, int K);

/// Replaces each pair {z, w} with Re z = Re w (within re_tol relative),
/// Im z = -Im w and |Im z| <= im_max by its real centroid. Such pairs are
/// the discrete splitting of a real exceptional point. Order is preserved.
std::vector<cplx> merge_conjugate_pairs(const std::vector<cplx>& values, double re_tol = 1e-6,
                                        double im_max = 0.05);

}  // namespace pdmspec::eig
