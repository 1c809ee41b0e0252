#include "pdmspec/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "pdmspec/error.hpp"

namespace pdmspec::eig {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxSweeps = 100;
constexpr int kInverseSteps = 4;
constexpr int kJitterRetries = 3;

double abs1(const cplx& z) { return std::abs(z.real()) + std::abs(z.imag()); }

bool finite(const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

bool lex_less(const cplx& a, const cplx& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

/// Diagonal similarity B = D^{-1} A D making row and column norms
/// comparable; powers of two keep it exact.
Eigen::VectorXd balance(Eigen::MatrixXcd& A) {
  const Eigen::Index n = A.rows();
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(n);
  constexpr double radix = 2.0;
  constexpr double sqrdx = radix * radix;
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0;
      double r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += abs1(A(j, i));
        r += abs1(A(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      const double s = c + r;
      double g = r / radix;
      double f = 1.0;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        scale[i] *= f;
        A.row(i) /= f;
        A.col(i) *= f;
      }
    }
  }
  return scale;
}

/// Givens rotation G = [c s; -conj(s) c] with G [a; b] = [r; 0].
struct Givens {
  double c = 1.0;
  cplx s = 0.0;
};

Givens make_givens(const cplx& a, const cplx& b) {
  if (b == cplx(0.0)) return {};
  if (a == cplx(0.0)) return {0.0, std::conj(b) / std::abs(b)};
  const double aa = std::abs(a);
  const double r = std::hypot(aa, std::abs(b));
  return {aa / r, (a / aa) * std::conj(b) / r};
}

void rotate_rows(Eigen::MatrixXcd& H, Eigen::Index k, const Givens& g, Eigen::Index c0,
                 Eigen::Index c1) {
  for (Eigen::Index j = c0; j <= c1; ++j) {
    const cplx x = H(k, j);
    const cplx y = H(k + 1, j);
    H(k, j) = g.c * x + g.s * y;
    H(k + 1, j) = -std::conj(g.s) * x + g.c * y;
  }
}

void rotate_cols(Eigen::MatrixXcd& H, Eigen::Index k, const Givens& g, Eigen::Index r0,
                 Eigen::Index r1) {
  for (Eigen::Index i = r0; i <= r1; ++i) {
    const cplx x = H(i, k);
    const cplx y = H(i, k + 1);
    H(i, k) = g.c * x + std::conj(g.s) * y;
    H(i, k + 1) = -g.s * x + g.c * y;
  }
}

/// Both eigenvalues of [a b; c d], the larger one first.
std::pair<cplx, cplx> eig2(const cplx& a, const cplx& b, const cplx& c, const cplx& d) {
  const cplx m = 0.5 * (a + d);
  const cplx disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
  const cplx l1 = (std::real(std::conj(m) * disc) >= 0.0) ? m + disc : m - disc;
  const cplx det = a * d - b * c;
  const cplx l2 = (l1 == cplx(0.0)) ? cplx(0.0) : det / l1;
  return {l1, l2};
}

cplx wilkinson_shift(const Eigen::MatrixXcd& H, Eigen::Index hi) {
  const auto [l1, l2] = eig2(H(hi - 1, hi - 1), H(hi - 1, hi), H(hi, hi - 1), H(hi, hi));
  const cplx d = H(hi, hi);
  return (std::abs(l1 - d) < std::abs(l2 - d)) ? l1 : l2;
}

/// One implicit single-shift QR sweep on the active window [lo, hi]. Only
/// the window is updated: eigenvalues-only mode needs no Schur vectors.
void qr_sweep(Eigen::MatrixXcd& H, Eigen::Index lo, Eigen::Index hi, const cplx& shift) {
  Givens g = make_givens(H(lo, lo) - shift, H(lo + 1, lo));
  rotate_rows(H, lo, g, lo, hi);
  rotate_cols(H, lo, g, lo, std::min(lo + 2, hi));
  for (Eigen::Index k = lo + 1; k < hi; ++k) {
    g = make_givens(H(k, k - 1), H(k + 1, k - 1));
    rotate_rows(H, k, g, k - 1, hi);
    H(k + 1, k - 1) = 0.0;
    rotate_cols(H, k, g, lo, std::min(k + 2, hi));
  }
}

}  // namespace

DenseEigensolver::DenseEigensolver(const Eigen::MatrixXcd& A) : A_(A) {
  if (A.rows() != A.cols() || A.rows() == 0) throw BadParams("eigensolver needs a square matrix");
  for (Eigen::Index j = 0; j < A.cols(); ++j)
    for (Eigen::Index i = 0; i < A.rows(); ++i)
      if (!finite(A(i, j))) throw DomainError("matrix has non-finite entries");
  norm_a_ = A_.norm();
  H_ = A_;
  scale_ = balance(H_);
  const Eigen::Index n = H_.rows();
  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const Eigen::Index m = n - k - 1;
    Eigen::VectorXcd x = H_.col(k).tail(m);
    const double tail = x.tail(m - 1).norm();
    if (tail == 0.0) {
      reflectors_.emplace_back();
      continue;
    }
    const double xn = x.norm();
    const cplx phase = (x[0] == cplx(0.0)) ? cplx(1.0) : x[0] / std::abs(x[0]);
    const cplx alpha = -phase * xn;
    x[0] -= alpha;
    x /= x.norm();
    H_.bottomRightCorner(m, n - k).noalias() -= 2.0 * x * (x.adjoint() * H_.bottomRightCorner(m, n - k));
    H_.rightCols(m).noalias() -= 2.0 * (H_.rightCols(m) * x) * x.adjoint();
    H_(k + 1, k) = alpha;
    H_.col(k).tail(m - 1).setZero();
    reflectors_.push_back(std::move(x));
  }
  norm_h_ = H_.norm();
}

std::vector<cplx> DenseEigensolver::eigenvalues(QRStats* stats) const {
  Eigen::MatrixXcd H = H_;
  const Eigen::Index n = H.rows();
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(n));
  QRStats st;
  Eigen::Index hi = n - 1;
  int sweeps = 0;
  const double tiny = std::numeric_limits<double>::min() * static_cast<double>(n) / kEps;
  while (hi >= 0) {
    Eigen::Index l = hi;
    for (; l > 0; --l) {
      double s = abs1(H(l, l)) + abs1(H(l - 1, l - 1));
      if (s == 0.0) {
        if (l >= 2) s += abs1(H(l - 1, l - 2));
        if (l + 1 <= hi) s += abs1(H(l + 1, l));
      }
      const double sub = abs1(H(l, l - 1));
      if (sub <= kEps * s || sub <= tiny) {
        H(l, l - 1) = 0.0;
        break;
      }
    }
    if (l == hi) {
      out.push_back(H(hi, hi));
      --hi;
      sweeps = 0;
      ++st.deflations;
      continue;
    }
    if (l == hi - 1) {
      const auto [l1, l2] = eig2(H(l, l), H(l, hi), H(hi, l), H(hi, hi));
      out.push_back(l1);
      out.push_back(l2);
      hi -= 2;
      sweeps = 0;
      st.deflations += 2;
      continue;
    }
    if (++sweeps > kMaxSweeps) {
      std::ostringstream msg;
      msg << "QR failed to converge after " << kMaxSweeps << " sweeps (active block " << l << ".."
          << hi << ")";
      throw NoConvergence(msg.str());
    }
    cplx shift;
    if (sweeps % 10 == 0) {
      shift = H(hi, hi) + std::abs(H(hi, hi - 1).real()) + std::abs(H(hi - 1, hi - 2).real());
    } else {
      shift = wilkinson_shift(H, hi);
    }
    qr_sweep(H, l, hi, shift);
    ++st.iterations;
  }
  std::sort(out.begin(), out.end(), lex_less);
  if (stats) *stats = st;
  return out;
}

void DenseEigensolver::apply_q(Eigen::VectorXcd& v) const {
  const Eigen::Index n = v.size();
  for (std::size_t k = reflectors_.size(); k-- > 0;) {
    const Eigen::VectorXcd& u = reflectors_[k];
    if (u.size() == 0) continue;
    const Eigen::Index m = n - static_cast<Eigen::Index>(k) - 1;
    const cplx dot = u.dot(v.tail(m));
    v.tail(m) -= 2.0 * dot * u;
  }
}

Eigen::VectorXcd DenseEigensolver::eigenvector(cplx lambda, double* residual) const {
  const Eigen::Index n = H_.rows();
  const double scale = std::max(1.0, std::abs(lambda));
  const double pivot_floor = kEps * std::max(norm_h_, 1e-300);
  for (int attempt = 0; attempt <= kJitterRetries; ++attempt) {
    const cplx jitter = 1e-10 * scale * std::pow(100.0, attempt) * cplx(1.0, 0.5);
    const cplx sigma = lambda + jitter;
    // Hessenberg LU with partial pivoting between neighbouring rows.
    Eigen::MatrixXcd U = H_;
    U.diagonal().array() -= sigma;
    std::vector<cplx> mult(static_cast<std::size_t>(n), 0.0);
    std::vector<char> swapped(static_cast<std::size_t>(n), 0);
    bool singular = false;
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
      if (abs1(U(k + 1, k)) > abs1(U(k, k))) {
        U.row(k).tail(n - k).swap(U.row(k + 1).tail(n - k));
        swapped[static_cast<std::size_t>(k)] = 1;
      }
      if (U(k, k) == cplx(0.0)) {
        singular = true;
        break;
      }
      const cplx l = U(k + 1, k) / U(k, k);
      mult[static_cast<std::size_t>(k)] = l;
      if (l != cplx(0.0)) U.row(k + 1).tail(n - k - 1) -= l * U.row(k).tail(n - k - 1);
      U(k + 1, k) = 0.0;
    }
    if (singular) continue;
    for (Eigen::Index k = 0; k < n; ++k)
      if (abs1(U(k, k)) < pivot_floor) U(k, k) = pivot_floor;

    Eigen::VectorXcd y(n);
    for (Eigen::Index i = 0; i < n; ++i)
      y[i] = cplx(1.0 + 0.37 * std::sin(1.3 * static_cast<double>(i) + 0.1), 0.0);
    y.normalize();
    bool ok = true;
    for (int step = 0; step < kInverseSteps && ok; ++step) {
      for (Eigen::Index k = 0; k + 1 < n; ++k) {
        if (swapped[static_cast<std::size_t>(k)]) std::swap(y[k], y[k + 1]);
        y[k + 1] -= mult[static_cast<std::size_t>(k)] * y[k];
      }
      U.triangularView<Eigen::Upper>().solveInPlace(y);
      const double nrm = y.norm();
      ok = std::isfinite(nrm) && nrm > 0.0;
      if (ok) y /= nrm;
    }
    if (!ok) continue;
    apply_q(y);
    y.array() *= scale_.array().cast<cplx>();
    y.normalize();
    // Fix the global phase so the largest component is real and positive.
    Eigen::Index imax = 0;
    y.cwiseAbs().maxCoeff(&imax);
    y *= std::conj(y[imax]) / std::abs(y[imax]);
    if (residual) *residual = eigen_residual(A_, lambda, y);
    return y;
  }
  std::ostringstream msg;
  msg << "inverse iteration at lambda = " << lambda << " stayed singular after "
      << kJitterRetries << " jitter retries";
  throw SingularShift(msg.str());
}

std::vector<cplx> spectrum(const Eigen::MatrixXcd& A, QRStats* stats) {
  return DenseEigensolver(A).eigenvalues(stats);
}

std::vector<cplx> spectrum(const discretize::OperatorMatrix& m, QRStats* stats) {
  return spectrum(m.A, stats);
}

Eigen::VectorXcd eigenvector(const discretize::OperatorMatrix& m, cplx lambda, double* residual) {
  return DenseEigensolver(m.A).eigenvector(lambda, residual);
}

double eigen_residual(const Eigen::MatrixXcd& A, cplx lambda, const Eigen::VectorXcd& v) {
  const double na = A.norm();
  const double nv = v.norm();
  if (na == 0.0 || nv == 0.0) return (A * v - lambda * v).norm();
  return (A * v - lambda * v).norm() / (na * nv);
}

double boundary_amplitude_ratio(const Eigen::VectorXcd& v) {
  if (v.size() == 0) return std::numeric_limits<double>::quiet_NaN();
  const double peak = v.cwiseAbs().maxCoeff();
  if (peak == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return std::max(std::abs(v[0]), std::abs(v[v.size() - 1])) / peak;
}

const char* to_string(Confinement c) noexcept {
  return c == Confinement::open ? "open" : "hard_wall";
}

std::vector<cplx> SpectrumReport::eigenvalues() const {
  std::vector<cplx> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.value);
  return out;
}

std::vector<cplx> SpectrumReport::bound_values() const {
  std::vector<cplx> out;
  for (const auto& e : entries)
    if (e.is_bound) out.push_back(e.value);
  return out;
}

std::vector<const EigenEntry*> SpectrumReport::bound_entries() const {
  std::vector<const EigenEntry*> out;
  for (const auto& e : entries)
    if (e.is_bound) out.push_back(&e);
  return out;
}

int SpectrumReport::bound_count() const {
  return static_cast<int>(std::count_if(entries.begin(), entries.end(),
                                        [](const EigenEntry& e) { return e.is_bound; }));
}

SpectrumReport analyze(const discretize::OperatorMatrix& m, const AnalyzeOptions& opts) {
  const DenseEigensolver solver(m.A);
  SpectrumReport rep;
  rep.confinement = opts.confinement;
  rep.floor = opts.floor;
  rep.N = m.N();
  const std::vector<cplx> values = solver.eigenvalues(&rep.stats);
  rep.entries.reserve(values.size());
  int vectors = 0;
  for (const cplx& z : values) {
    EigenEntry e;
    e.value = z;
    e.candidate = opts.confinement == Confinement::hard_wall || z.real() < opts.floor;
    if (e.candidate && vectors < opts.max_vectors) {
      e.vector = solver.eigenvector(z, &e.residual);
      e.boundary_ratio = boundary_amplitude_ratio(e.vector);
      ++vectors;
    }
    rep.entries.push_back(std::move(e));
  }
  return bound_filter(rep, opts.ratio_tol);
}

SpectrumReport bound_filter(const SpectrumReport& rep, double ratio_tol) {
  SpectrumReport out = rep;
  for (auto& e : out.entries) {
    if (out.confinement == Confinement::hard_wall)
      e.is_bound = e.candidate && e.has_vector();
    else
      e.is_bound = e.candidate && e.has_vector() && e.boundary_ratio < ratio_tol;
  }
  return out;
}

SpectrumReport lowest_bound(const SpectrumReport& rep, int K) {
  SpectrumReport out = rep;
  int kept = 0;
  for (auto& e : out.entries) {
    if (!e.is_bound) continue;
    if (kept < K)
      ++kept;
    else
      e.is_bound = false;
  }
  return out;
}

std::vector<cplx> merge_conjugate_pairs(const std::vector<cplx>& values, double re_tol,
                                        double im_max) {
  std::vector<cplx> out;
  std::vector<char> used(values.size(), 0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (used[i]) continue;
    const cplx z = values[i];
    if (z.imag() != 0.0 && std::abs(z.imag()) <= im_max) {
      for (std::size_t j = i + 1; j < values.size(); ++j) {
        if (used[j]) continue;
        const cplx w = values[j];
        const double re_gap = std::abs(z.real() - w.real());
        const double im_gap = std::abs(z.imag() + w.imag());
        const double scale = std::max(1.0, std::abs(z.real()));
        if (re_gap <= re_tol * scale && im_gap <= re_tol * scale) {
          used[j] = 1;
          used[i] = 1;
          out.emplace_back(0.5 * (z.real() + w.real()), 0.0);
          break;
        }
      }
    }
    if (!used[i]) out.push_back(z);
    used[i] = 1;
  }
  return out;
}

}  // namespace pdmspec::eig
