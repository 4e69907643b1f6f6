#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geometry.hpp"
#include "linalg.hpp"
#include "random.hpp"

namespace qnr {

inline constexpr double kQuadraticTol = 1e-10;

/// Best fit of A^2 = 2 mu A + nu I and the quantities derived from it.
struct QuadraticSignature {
  Complex mu;
  Complex nu;
  Complex lambda1;  // mu + sqrt(mu^2 + nu)
  Complex lambda2;  // mu - sqrt(mu^2 + nu)
  double s = 0.0;   // ||A - mu I||
  double residual = 0.0;

  Complex discriminant() const { return mu * mu + nu; }
  bool quadratic(double tol = kQuadraticTol) const { return residual <= tol; }
};

/// Fits (mu, nu) by projecting A^2 onto span{A, I} in the Frobenius inner
/// product. The residual ||A^2 - 2 mu A - nu I||_F is reported relative to
/// max(1, ||A||_F^2). Scalar matrices get mu = alpha, nu = -alpha^2.
inline QuadraticSignature fit_quadratic(const ComplexMatrix& a) {
  require_operator(a);
  const auto n = static_cast<double>(a.rows());
  const ComplexMatrix id = ComplexMatrix::Identity(a.rows(), a.cols());
  const Complex alpha = a.trace() / n;
  const ComplexMatrix b = a - alpha * id;  // trace-free part, orthogonal to I
  const double b_norm2 = b.squaredNorm();

  QuadraticSignature sig;
  if (b_norm2 <= 1e-26 * std::max(1.0, a.squaredNorm())) {
    sig.mu = alpha;
    sig.nu = -alpha * alpha;
  } else {
    // A^2 = B^2 + 2 alpha B + alpha^2 I; project B^2 onto B and I separately.
    const ComplexMatrix b2 = b * b;
    const Complex along_b = (b.adjoint() * b2).trace() / b_norm2;
    sig.mu = alpha + 0.5 * along_b;
    sig.nu = b2.trace() / n + alpha * alpha - 2.0 * sig.mu * alpha;
  }
  // A double root shows up as a discriminant at rounding level, whose square
  // root would split the eigenvalue by ~1e-8; snap it.
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, a.squaredNorm());
  const Complex root = std::abs(sig.discriminant()) <= noise ? Complex{} : std::sqrt(sig.discriminant());
  sig.lambda1 = sig.mu + root;
  sig.lambda2 = sig.mu - root;
  const ComplexMatrix res = a * a - 2.0 * sig.mu * a - sig.nu * id;
  sig.residual = res.norm() / std::max(1.0, a.squaredNorm());
  sig.s = spectral_norm(a - sig.mu * id);
  return sig;
}

/// Unitary reduction U* A U = l1 I (+) l2 I (+) [[l1 I, 2X], [0, l2 I]].
struct CanonicalForm {
  std::size_t dim1 = 0;
  std::size_t dim2 = 0;
  std::size_t dim3 = 0;
  std::vector<double> x_values;  // non-increasing, singular values of X
  ComplexMatrix unitary;         // columns: H1 basis, H2 basis, H3 first copy, H3 second copy
  Complex lambda1;
  Complex lambda2;

  double x_max() const { return x_values.empty() ? 0.0 : x_values.front(); }
};

/// The block operator l1 I_{d1} (+) l2 I_{d2} (+) [[l1 I, 2X], [0, l2 I]], X = diag(x).
inline ComplexMatrix canonical_block(Complex l1, Complex l2, const std::vector<double>& x,
                                     std::size_t d1, std::size_t d2) {
  const std::size_t d3 = x.size();
  const auto n = static_cast<Eigen::Index>(d1 + d2 + 2 * d3);
  ComplexMatrix c = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < d1; ++i) c(i, i) = l1;
  for (std::size_t i = 0; i < d2; ++i) c(d1 + i, d1 + i) = l2;
  const std::size_t first = d1 + d2;
  for (std::size_t i = 0; i < d3; ++i) {
    const auto r = static_cast<Eigen::Index>(first + i);
    const auto s = static_cast<Eigen::Index>(first + d3 + i);
    c(r, r) = l1;
    c(s, s) = l2;
    c(r, s) = 2.0 * x[i];
  }
  return c;
}

inline ComplexMatrix reassemble(const CanonicalForm& f) {
  return canonical_block(f.lambda1, f.lambda2, f.x_values, f.dim1, f.dim2);
}

/// Builds U C U* for the canonical block C. Test-fixture inverse of
/// canonical_decompose.
inline ComplexMatrix assemble_canonical(Complex l1, Complex l2, const std::vector<double>& x,
                                        std::size_t d1, std::size_t d2, const ComplexMatrix& u) {
  for (double v : x)
    if (!(v > 0.0)) throw InvalidParameter("x values must be positive");
  const ComplexMatrix c = canonical_block(l1, l2, x, d1, d2);
  if (u.rows() != c.rows() || u.cols() != c.cols())
    throw InvalidParameter("unitary has the wrong dimension");
  return u * c * u.adjoint();
}

/// Same, conjugated by a Haar-random unitary drawn from `rng`.
inline ComplexMatrix assemble_canonical(Complex l1, Complex l2, const std::vector<double>& x,
                                        std::size_t d1, std::size_t d2, CounterRng& rng) {
  const auto n = static_cast<Eigen::Index>(d1 + d2 + 2 * x.size());
  return assemble_canonical(l1, l2, x, d1, d2, random_unitary(n, rng));
}

namespace detail {

// Orthonormal basis of ker(M): right singular vectors whose singular values
// fall below `cutoff`.
inline ComplexMatrix kernel_basis(const ComplexMatrix& m, double cutoff) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
  const RealVector& sv = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  return svd.matrixV().rightCols(m.cols() - rank);
}

inline void check_reassembly(const ComplexMatrix& a, const CanonicalForm& f) {
  const ComplexMatrix diff = f.unitary.adjoint() * a * f.unitary - reassemble(f);
  const double err = diff.norm();
  if (!(err <= 1e-8 * tolerance_scale(a)))
    throw DefectiveDecomposition("reassembly residual " + std::to_string(err));
}

inline CanonicalForm decompose_distinct(const ComplexMatrix& a, const QuadraticSignature& sig) {
  const Eigen::Index n = a.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const Complex gap = sig.lambda2 - sig.lambda1;
  // Non-zero singular values of A - l_j I are at least |l1 - l2|.
  const double cutoff = 0.5 * std::abs(gap);
  const ComplexMatrix b1 = kernel_basis(a - sig.lambda1 * id, cutoff);
  const ComplexMatrix b2 = kernel_basis(a - sig.lambda2 * id, cutoff);
  if (b1.cols() + b2.cols() != n)
    throw DefectiveDecomposition("eigenspaces do not span the space");

  // Principal angles between the eigenspaces.
  Eigen::JacobiSVD<ComplexMatrix> svd(b1.adjoint() * b2, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector& cosines = svd.singularValues();
  const ComplexMatrix u1 = b1 * svd.matrixU();
  const ComplexMatrix u2 = b2 * svd.matrixV();

  std::size_t d3 = 0;
  while (d3 < static_cast<std::size_t>(cosines.size()) && cosines(d3) > 1e-10) ++d3;
  if (d3 > 0 && cosines(0) >= 1.0 - 1e-10)
    throw DefectiveDecomposition("eigenspaces intersect (cosine " + std::to_string(cosines(0)) + ")");

  CanonicalForm f;
  f.lambda1 = sig.lambda1;
  f.lambda2 = sig.lambda2;
  f.dim3 = d3;
  f.dim1 = static_cast<std::size_t>(b1.cols()) - d3;
  f.dim2 = static_cast<std::size_t>(b2.cols()) - d3;
  f.unitary.resize(n, n);

  const auto d1 = static_cast<Eigen::Index>(f.dim1);
  const auto d2 = static_cast<Eigen::Index>(f.dim2);
  const auto k3 = static_cast<Eigen::Index>(d3);
  f.unitary.leftCols(d1) = u1.rightCols(d1);
  f.unitary.middleCols(d1, d2) = u2.rightCols(d2);

  // w = sigma u + sqrt(1 - sigma^2) f; rotate f so that the coupling is +2x.
  const Complex phase = std::conj(gap) / std::abs(gap);
  f.x_values.resize(d3);
  for (Eigen::Index i = 0; i < k3; ++i) {
    const double c = cosines(i);
    const double sn = std::sqrt((1.0 - c) * (1.0 + c));
    ComplexVector e = u1.col(i);
    ComplexVector w = u2.col(i);
    const Complex overlap = e.dot(w);  // real, equal to c up to rounding
    ComplexVector g = (w - overlap * e) / sn;
    f.unitary.col(d1 + d2 + i) = e;
    f.unitary.col(d1 + d2 + k3 + i) = phase * g;
    f.x_values[i] = 0.5 * std::abs(gap) * c / sn;
  }
  check_reassembly(a, f);
  return f;
}

inline CanonicalForm decompose_nilpotent(const ComplexMatrix& a, const QuadraticSignature& sig) {
  const Eigen::Index n = a.rows();
  const ComplexMatrix shifted = a - sig.mu * ComplexMatrix::Identity(n, n);
  Eigen::JacobiSVD<ComplexMatrix> svd(shifted, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector& sv = svd.singularValues();
  const double cutoff = 1e-10 * tolerance_scale(a);
  Eigen::Index k3 = 0;
  while (k3 < sv.size() && sv(k3) > cutoff) ++k3;
  if (2 * k3 > n) throw DefectiveDecomposition("shifted operator is not square-zero");

  CanonicalForm f;
  f.lambda1 = sig.mu;
  f.lambda2 = sig.mu;
  f.dim3 = static_cast<std::size_t>(k3);
  f.dim1 = static_cast<std::size_t>(n - 2 * k3);
  f.dim2 = 0;
  f.unitary.resize(n, n);

  // (A - mu) v_i = sigma_i u_i with range in the kernel: u_i spans the first copy
  // of H3, v_i the second. The rest of the kernel (orthogonal to the u_i) is H1.
  const ComplexMatrix& left = svd.matrixU();
  const ComplexMatrix& right = svd.matrixV();
  ComplexMatrix ranges(n, k3);
  ranges = left.leftCols(k3);
  ComplexMatrix rest = right.rightCols(n - k3);  // kernel of A - mu
  // Remove the range component from the kernel and orthonormalize what is left.
  ComplexMatrix proj = rest - ranges * (ranges.adjoint() * rest);
  Eigen::JacobiSVD<ComplexMatrix> psvd(proj, Eigen::ComputeFullU);
  const Eigen::Index d1 = n - 2 * k3;
  f.unitary.leftCols(d1) = psvd.matrixU().leftCols(d1);
  f.unitary.middleCols(d1, k3) = ranges;
  f.unitary.rightCols(k3) = right.leftCols(k3);
  f.x_values.resize(static_cast<std::size_t>(k3));
  for (Eigen::Index i = 0; i < k3; ++i) f.x_values[i] = 0.5 * sv(i);
  check_reassembly(a, f);
  return f;
}

}  // namespace detail

/// Unitary reduction to canonical form. Requires the quadratic verdict.
inline CanonicalForm canonical_decompose(const ComplexMatrix& a, const QuadraticSignature& sig,
                                         double tol = kQuadraticTol) {
  require_operator(a);
  if (!sig.quadratic(tol))
    throw NotQuadratic("residual " + std::to_string(sig.residual));
  const double split = std::abs(sig.lambda1 - sig.lambda2);
  if (split <= 1e-9 * tolerance_scale(a)) return detail::decompose_nilpotent(a, sig);
  return detail::decompose_distinct(a, sig);
}

enum class PredictionSource { classical, essential, c_scaled };
enum class Attainment { yes, no, unknown };

inline const char* to_string(PredictionSource s) {
  switch (s) {
    case PredictionSource::classical: return "classical";
    case PredictionSource::essential: return "essential";
    case PredictionSource::c_scaled: return "c-scaled";
  }
  return "classical";
}

inline const char* to_string(Attainment a) {
  switch (a) {
    case Attainment::yes: return "yes";
    case Attainment::no: return "no";
    case Attainment::unknown: return "unknown";
  }
  return "unknown";
}

struct EllipsePrediction {
  EllipseDisc ellipse;
  PredictionSource source = PredictionSource::classical;
  double s_used = 0.0;
  Attainment attained = Attainment::unknown;
};

/// s + |mu^2 + nu| / s, with the convention that the quotient vanishes at s = 0.
inline double predicted_major_axis(double s, Complex discriminant) {
  if (s == 0.0) return 0.0;
  return s + std::abs(discriminant) / s;
}

/// Elliptical disc predicted for W(A): foci lambda_{1,2}, major axis from s.
/// Finite matrices attain their norms, so the disc is closed.
inline EllipsePrediction predict_W(const QuadraticSignature& sig, double tol = kQuadraticTol) {
  if (!sig.quadratic(tol)) throw NotQuadratic("residual " + std::to_string(sig.residual));
  EllipsePrediction p;
  p.source = PredictionSource::classical;
  p.s_used = sig.s;
  p.attained = Attainment::yes;
  if (sig.s == 0.0) {
    p.ellipse = EllipseDisc::point(sig.mu, Closure::closed);
  } else {
    p.ellipse = EllipseDisc(sig.lambda1, sig.lambda2, predicted_major_axis(sig.s, sig.discriminant()),
                            Closure::closed);
  }
  return p;
}

/// Closed elliptical disc for W_ess(A) from a caller-supplied essential norm s0
/// of A - mu I; s0 = 0 collapses to the point mu.
inline EllipsePrediction predict_Wess(const QuadraticSignature& sig, double s0,
                                      double tol = kQuadraticTol) {
  if (!sig.quadratic(tol)) throw NotQuadratic("residual " + std::to_string(sig.residual));
  if (!(s0 >= 0.0) || !std::isfinite(s0)) throw InvalidParameter("essential norm must be >= 0");
  EllipsePrediction p;
  p.source = PredictionSource::essential;
  p.s_used = s0;
  p.attained = Attainment::unknown;
  if (s0 == 0.0) {
    p.ellipse = EllipseDisc::point(sig.mu, Closure::closed);
  } else {
    p.ellipse = EllipseDisc(sig.lambda1, sig.lambda2, predicted_major_axis(s0, sig.discriminant()),
                            Closure::closed);
  }
  return p;
}

/// Closedness of W(A) for a quadratic operator from norm data of A - mu I.
/// A strict gap norm > ess_norm forces a closed disc; on equality the answer
/// depends on the dimension of the subspace where the norm is attained.
inline Closure classify_closed(double norm, double ess_norm, std::optional<std::size_t> attained_dim,
                               std::size_t m = 1) {
  if (!(ess_norm >= 0.0) || norm < ess_norm - 1e-12)
    throw InvalidNorms("norm " + std::to_string(norm) + " below essential norm " +
                       std::to_string(ess_norm));
  if (norm > ess_norm + 1e-12) return Closure::closed;
  if (!attained_dim) return Closure::unknown;
  return *attained_dim >= m ? Closure::closed : Closure::open;
}

struct NormIdentity {
  double lhs = 0.0;  // ||P||, P = (A - l1 I)/(l2 - l1)
  double rhs = 0.0;  // (||S|| + ||S||^{-1})/2, S = (A - mu I)/sqrt(mu^2 + nu)
};

inline NormIdentity projection_involution_check(const ComplexMatrix& a, const QuadraticSignature& sig) {
  require_operator(a);
  const Complex root = std::sqrt(sig.discriminant());
  if (std::abs(root) <= 1e-12 * tolerance_scale(a))
    throw DegenerateEigenvalues("lambda1 = lambda2");
  const ComplexMatrix id = ComplexMatrix::Identity(a.rows(), a.cols());
  const double p = spectral_norm((a - sig.lambda1 * id) / (sig.lambda2 - sig.lambda1));
  const double s = spectral_norm((a - sig.mu * id) / root);
  return {p, 0.5 * (s + 1.0 / s)};
}

/// A named, deterministic family of finite sections N -> A_N.
struct TruncationFamily {
  std::string name;
  std::function<ComplexMatrix(std::size_t)> section;
};

struct EssNormEstimate {
  double estimate = 0.0;           // last value of the sequence
  std::vector<std::size_t> sizes;
  std::vector<double> sequence;    // ||A_N Q_K|| per size
  bool non_monotone_warning = false;
};

/// ||A Q_K||: norm of the columns K..N-1 of A.
inline double tail_norm(const ComplexMatrix& a, std::size_t k) {
  const auto kk = static_cast<Eigen::Index>(k);
  if (kk >= a.cols()) return 0.0;
  return spectral_norm(a.rightCols(a.cols() - kk));
}

// Heuristic essential-norm estimate: for a bounded A, ||A Q_K|| decreases to
// ||A||_ess as K grows, since A - A P_K is a finite-rank perturbation. Each
// section is compressed to its columns >= floor(tail_fraction * N). The value
// is an estimate only; finite sections cannot certify an essential norm.
inline EssNormEstimate estimate_ess_norm(const TruncationFamily& family,
                                         const std::vector<std::size_t>& sizes,
                                         double tail_fraction = 0.5) {
  if (sizes.size() < 3) throw InvalidParameter("need at least 3 sizes");
  if (!(tail_fraction > 0.0 && tail_fraction < 1.0))
    throw InvalidParameter("tail_fraction must lie in (0, 1)");
  for (std::size_t i = 1; i < sizes.size(); ++i)
    if (sizes[i] <= sizes[i - 1]) throw InvalidParameter("sizes must be increasing");

  EssNormEstimate est;
  est.sizes = sizes;
  for (std::size_t n : sizes) {
    const ComplexMatrix a = family.section(n);
    const auto k = static_cast<std::size_t>(std::floor(tail_fraction * static_cast<double>(n)));
    est.sequence.push_back(tail_norm(a, k));
  }
  est.estimate = est.sequence.back();

  // Oscillation: a reversal of direction by more than 5% of the magnitude.
  const double scale = std::max(1e-300, *std::max_element(est.sequence.begin(), est.sequence.end()));
  for (std::size_t i = 2; i < est.sequence.size(); ++i) {
    const double d1 = est.sequence[i - 1] - est.sequence[i - 2];
    const double d2 = est.sequence[i] - est.sequence[i - 1];
    if (d1 * d2 < 0.0 && std::min(std::abs(d1), std::abs(d2)) > 0.05 * scale)
      est.non_monotone_warning = true;
  }
  return est;
}

}  // namespace qnr
