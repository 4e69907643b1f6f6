#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "random.hpp"

namespace qnr {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-8;

/// max(1, ||A||_F): the scale every relative tolerance is measured against.
inline double tolerance_scale(const ComplexMatrix& a) { return std::max(1.0, a.norm()); }

inline bool all_finite(const ComplexMatrix& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
  return true;
}

/// Throws InvalidMatrix unless `a` is a non-empty square matrix of finite entries.
inline void require_operator(const ComplexMatrix& a) {
  if (a.rows() == 0 || a.rows() != a.cols())
    throw InvalidMatrix("expected a non-empty square matrix, got " + std::to_string(a.rows()) +
                        "x" + std::to_string(a.cols()));
  if (!all_finite(a)) throw InvalidMatrix("matrix has non-finite entries");
}

inline ComplexMatrix adjoint(const ComplexMatrix& a) { return a.adjoint(); }

/// (A + A*) / 2.
inline ComplexMatrix real_part(const ComplexMatrix& a) { return (a + a.adjoint()) * 0.5; }

/// Re(e^{-i psi} A), the Hermitian matrix whose top eigenvalue is the support
/// function of W(A) in the outer-normal direction psi.
inline ComplexMatrix rotated_real_part(const ComplexMatrix& a, double psi) {
  const Complex phase = std::polar(1.0, -psi);
  ComplexMatrix h(a.rows(), a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = j; i < a.rows(); ++i) {
      const Complex v = 0.5 * (phase * a(i, j) + std::conj(phase * a(j, i)));
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  return h;
}

struct HermitianSpectrum {
  RealVector eigenvalues;     // non-increasing
  ComplexMatrix eigenvectors;  // column k pairs with eigenvalues[k]
};

namespace detail {

// Eigen returns ascending eigenvalues; flip to the non-increasing order used
// throughout the library.
inline HermitianSpectrum solve_hermitian(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw NoConvergence("Hermitian eigensolver did not converge (n = " +
                        std::to_string(h.rows()) + ")");
  return {solver.eigenvalues().reverse(), solver.eigenvectors().rowwise().reverse()};
}

inline RealVector hermitian_eigenvalues(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NoConvergence("Hermitian eigensolver did not converge (n = " +
                        std::to_string(h.rows()) + ")");
  return solver.eigenvalues().reverse();
}

// Number of eigenvalues of the symmetric tridiagonal (d, e) below x (Sturm count).
inline Eigen::Index sturm_count(const RealVector& d, const RealVector& e, double x, double pivmin) {
  Eigen::Index count = 0;
  double q = d(0) - x;
  if (std::abs(q) < pivmin) q = -pivmin;
  if (q < 0.0) ++count;
  for (Eigen::Index i = 1; i < d.size(); ++i) {
    q = d(i) - x - e(i - 1) * e(i - 1) / q;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

// Largest eigenvalue of a symmetric tridiagonal matrix by bisection.
inline double tridiagonal_top_eigenvalue(const RealVector& d, const RealVector& e) {
  const Eigen::Index n = d.size();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo, scale = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(e(i - 1)) : 0.0) + (i + 1 < n ? std::abs(e(i)) : 0.0);
    lo = std::min(lo, d(i) - r);
    hi = std::max(hi, d(i) + r);
    scale = std::max(scale, std::abs(d(i)) + r);
  }
  if (scale == 0.0) return 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, scale * scale);
  lo -= 2.0 * eps * scale;
  hi += 2.0 * eps * scale;
  // Invariant: fewer than n eigenvalues below lo, all n below hi.
  for (int it = 0; it < 200 && hi - lo > 2.0 * eps * std::max(std::abs(lo), std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(d, e, mid, pivmin) == n) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Eigenvector of the tridiagonal (d, e) for an eigenvalue estimate `lambda`
// by inverse iteration, using Gaussian elimination with partial pivoting.
inline RealVector tridiagonal_eigenvector(const RealVector& d, const RealVector& e, double lambda) {
  const Eigen::Index n = d.size();
  RealVector y = RealVector::Ones(n);
  if (n == 1) return y;
  double scale = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) scale = std::max(scale, std::abs(d(i) - lambda));
  for (Eigen::Index i = 0; i + 1 < n; ++i) scale = std::max(scale, std::abs(e(i)));
  const double tiny = std::max(scale, 1e-300) * std::numeric_limits<double>::epsilon();

  // Row i of the factor: u0(i) x_i + u1(i) x_{i+1} + u2(i) x_{i+2}.
  RealVector u0(n), u1 = RealVector::Zero(n), u2 = RealVector::Zero(n), mult(n);
  std::vector<bool> swapped(static_cast<std::size_t>(n), false);
  double diag = d(0) - lambda, upper = e(0);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double below = e(i);  // subdiagonal entry of row i+1
    const double next_diag = d(i + 1) - lambda;
    const double next_upper = (i + 2 < n) ? e(i + 1) : 0.0;
    if (std::abs(diag) >= std::abs(below)) {
      if (diag == 0.0) diag = tiny;
      const double m = below / diag;
      mult(i) = m;
      u0(i) = diag;
      u1(i) = upper;
      u2(i) = 0.0;
      diag = next_diag - m * upper;
      upper = next_upper;
    } else {
      const double m = diag / below;
      mult(i) = m;
      swapped[static_cast<std::size_t>(i)] = true;
      u0(i) = below;
      u1(i) = next_diag;
      u2(i) = next_upper;
      diag = upper - m * next_diag;
      upper = -m * next_upper;
    }
  }
  u0(n - 1) = std::abs(diag) < tiny ? (diag < 0.0 ? -tiny : tiny) : diag;

  for (int iter = 0; iter < 3; ++iter) {
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      if (swapped[static_cast<std::size_t>(i)]) {
        const double t = y(i);
        y(i) = y(i + 1);
        y(i + 1) = t - mult(i) * y(i + 1);
      } else {
        y(i + 1) -= mult(i) * y(i);
      }
    }
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      double v = y(i);
      if (i + 1 < n) v -= u1(i) * y(i + 1);
      if (i + 2 < n) v -= u2(i) * y(i + 2);
      const double piv = std::abs(u0(i)) < tiny ? (u0(i) < 0.0 ? -tiny : tiny) : u0(i);
      y(i) = v / piv;
    }
    y /= y.norm();
  }
  return y;
}

struct TopEigenpair {
  double value = 0.0;
  ComplexVector vector;
};

// Top eigenpair of a Hermitian matrix: Householder tridiagonalization, bisection
// for the eigenvalue, inverse iteration for the vector.
inline TopEigenpair top_eigenpair(const ComplexMatrix& h) {
  const Eigen::Index n = h.rows();
  if (n == 1) return {h(0, 0).real(), ComplexVector::Ones(1)};
  Eigen::Tridiagonalization<ComplexMatrix> tri(h);
  const RealVector d = tri.diagonal();
  const RealVector e = tri.subDiagonal();
  TopEigenpair out;
  out.value = tridiagonal_top_eigenvalue(d, e);
  const RealVector y = tridiagonal_eigenvector(d, e, out.value);
  out.vector = tri.matrixQ() * y.cast<Complex>();
  out.vector /= out.vector.norm();
  return out;
}

}  // namespace detail

/// Full spectral decomposition of a Hermitian matrix.
///
/// Inputs within kHermitianTol (relative to max(1, ||H||_F)) of Hermitian are
/// symmetrized before the solve; anything further away raises NotHermitian.
inline HermitianSpectrum hermitian_eig(const ComplexMatrix& h, double tol = kHermitianTol) {
  require_operator(h);
  const double skew = (h - h.adjoint()).norm();
  if (skew > tol * tolerance_scale(h))
    throw NotHermitian("||H - H*||_F = " + std::to_string(skew));
  return detail::solve_hermitian(real_part(h));
}

/// Largest singular value, via the top eigenvalue of A*A.
inline double spectral_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  const ComplexMatrix gram = a.cols() <= a.rows() ? ComplexMatrix(a.adjoint() * a)
                                                  : ComplexMatrix(a * a.adjoint());
  const ComplexMatrix h = real_part(gram);
  if (h.rows() == 1) return std::sqrt(std::max(0.0, h(0, 0).real()));
  Eigen::Tridiagonalization<ComplexMatrix> tri(h);
  const double top = detail::tridiagonal_top_eigenvalue(tri.diagonal(), tri.subDiagonal());
  return std::sqrt(std::max(0.0, top));
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
/// of R's diagonal absorbed into Q.
inline ComplexMatrix random_unitary(Eigen::Index n, CounterRng& rng) {
  ComplexMatrix z(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) z(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

inline ComplexMatrix random_complex_matrix(Eigen::Index rows, Eigen::Index cols, CounterRng& rng) {
  ComplexMatrix z(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) z(i, j) = rng.complex_normal();
  return z;
}

inline ComplexMatrix random_hermitian(Eigen::Index n, CounterRng& rng) {
  return real_part(random_complex_matrix(n, n, rng));
}

}  // namespace qnr
