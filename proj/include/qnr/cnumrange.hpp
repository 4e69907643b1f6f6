#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "geometry.hpp"
#include "linalg.hpp"
#include "numrange.hpp"
#include "parallel.hpp"
#include "quadratic.hpp"
#include "random.hpp"

namespace qnr {

/// Real coefficient vector of a c-numerical range, sorted non-increasing with
/// zeros removed.
class Coefficients {
 public:
  Coefficients() = default;

  explicit Coefficients(std::vector<double> values) {
    for (double v : values) {
      if (!std::isfinite(v)) throw InvalidParameter("non-finite coefficient");
      if (v == 0.0) {
        ++dropped_;
        continue;
      }
      values_.push_back(v);
    }
    if (values_.empty()) throw InvalidParameter("no non-zero coefficients");
    std::sort(values_.begin(), values_.end(), std::greater<>());
    for (double v : values_) {
      norm_ += std::abs(v);
      sum_ += v;
      (v > 0.0 ? m_plus_ : m_minus_) += 1;
    }
  }

  /// Collinear complex coefficients c_j = r_j e^{i gamma}: W_c(A) = W_r(e^{i gamma} A).
  /// The common direction gamma is reported by rotation().
  static Coefficients from_complex(const std::vector<Complex>& c, double tol = 1e-12) {
    double gamma = 0.0;
    bool found = false;
    for (const Complex& z : c)
      if (z != Complex{}) {
        gamma = std::arg(z);
        found = true;
        break;
      }
    if (!found) throw InvalidParameter("no non-zero coefficients");
    const Complex unrotate = std::polar(1.0, -gamma);
    std::vector<double> real;
    real.reserve(c.size());
    for (const Complex& z : c) {
      const Complex r = z * unrotate;
      if (std::abs(r.imag()) > tol * std::max(1.0, std::abs(z)))
        throw InvalidParameter("coefficients are not collinear with the origin");
      real.push_back(r.real());
    }
    Coefficients out(std::move(real));
    out.rotation_ = gamma;
    return out;
  }

  const std::vector<double>& values() const { return values_; }
  std::size_t k() const { return values_.size(); }
  double norm_c() const { return norm_; }
  double sum() const { return sum_; }
  std::size_t m_plus() const { return m_plus_; }
  std::size_t m_minus() const { return m_minus_; }
  std::size_t m() const { return std::max(m_plus_, m_minus_); }
  std::size_t dropped() const { return dropped_; }
  double rotation() const { return rotation_; }

 private:
  std::vector<double> values_;
  double norm_ = 0.0;
  double sum_ = 0.0;
  std::size_t m_plus_ = 0;
  std::size_t m_minus_ = 0;
  std::size_t dropped_ = 0;
  double rotation_ = 0.0;
};

namespace detail {

inline void require_fits(const ComplexMatrix& a, const Coefficients& c) {
  require_operator(a);
  if (c.k() > static_cast<std::size_t>(a.rows()))
    throw TooManyCoefficients(std::to_string(c.k()) + " coefficients for n = " +
                              std::to_string(a.rows()));
}

// Eigenvalue index paired with c_j: positive coefficients take the top
// eigenvalues in order, negative ones the bottom eigenvalues, so that both
// sequences are non-increasing once c is padded with zeros to length n.
inline std::size_t paired_index(const Coefficients& c, std::size_t j, std::size_t n) {
  return j < c.m_plus() ? j : n - c.k() + j;
}

}  // namespace detail

/// Optimal orthonormal k-frame for direction psi and the support value it attains.
struct KyFanFrame {
  double support = 0.0;
  ComplexMatrix frame;  // n x k, column j pairs with c_j
  Complex point;        // sum_j c_j <A x_j, x_j>
};

inline KyFanFrame kyfan_frame(const ComplexMatrix& a, const Coefficients& c, double psi) {
  detail::require_fits(a, c);
  const auto n = static_cast<std::size_t>(a.rows());
  const HermitianSpectrum spec = detail::solve_hermitian(rotated_real_part(a, psi));
  KyFanFrame out;
  out.frame.resize(a.rows(), static_cast<Eigen::Index>(c.k()));
  for (std::size_t j = 0; j < c.k(); ++j) {
    const auto idx = static_cast<Eigen::Index>(detail::paired_index(c, j, n));
    const double cj = c.values()[j];
    out.support += cj * spec.eigenvalues(idx);
    const ComplexVector v = spec.eigenvectors.col(idx);
    out.frame.col(static_cast<Eigen::Index>(j)) = v;
    out.point += cj * v.dot(a * v);
  }
  return out;
}

/// sup over orthonormal k-frames of sum_j c_j Re<e^{-i psi} A x_j, x_j>.
inline double kyfan_support(const ComplexMatrix& a, const Coefficients& c, double psi) {
  detail::require_fits(a, c);
  const auto n = static_cast<std::size_t>(a.rows());
  const RealVector ev = detail::hermitian_eigenvalues(rotated_real_part(a, psi));
  double h = 0.0;
  for (std::size_t j = 0; j < c.k(); ++j)
    h += c.values()[j] * ev(static_cast<Eigen::Index>(detail::paired_index(c, j, n)));
  return h;
}

/// Support table of W_c(A); witnesses are the points attained by the optimal frames.
inline ConvexRegion compute_wc(const ComplexMatrix& a, const Coefficients& c,
                               std::size_t m = kDefaultAngles, unsigned workers = 0) {
  detail::require_fits(a, c);
  if (m < 8) throw InvalidParameter("compute_wc needs at least 8 angles");
  ConvexRegion r;
  r.angles = angle_grid(m);
  r.support.resize(m);
  r.witnesses.resize(m);
  parallel_for(
      m,
      [&](std::size_t i) {
        const KyFanFrame f = kyfan_frame(a, c, r.angles[i]);
        r.support[i] = f.support;
        r.witnesses[i] = f.point;
      },
      workers);
  return r;
}

/// Orthonormal n x k frame from a complex Gaussian draw; draws whose condition
/// number exceeds 1e8 are rejected.
inline ComplexMatrix random_frame(Eigen::Index n, Eigen::Index k, CounterRng& rng) {
  for (;;) {
    const ComplexMatrix g = random_complex_matrix(n, k, rng);
    Eigen::JacobiSVD<ComplexMatrix> svd(g);
    const RealVector& sv = svd.singularValues();
    if (sv(k - 1) <= 0.0 || sv(0) / sv(k - 1) > 1e8) continue;
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    return qr.householderQ() * ComplexMatrix::Identity(n, k);
  }
}

/// sum_j c_j <A x_j, x_j> over random orthonormal frames; trial t uses stream t.
inline std::vector<Complex> frame_oracle(const ComplexMatrix& a, const Coefficients& c,
                                         std::size_t trials, std::uint64_t seed) {
  detail::require_fits(a, c);
  const CounterRng master(seed);
  const auto k = static_cast<Eigen::Index>(c.k());
  std::vector<Complex> out(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    CounterRng rng = master.split(t);
    const ComplexMatrix x = random_frame(a.rows(), k, rng);
    const ComplexMatrix ax = a * x;
    Complex z{};
    for (Eigen::Index j = 0; j < k; ++j) z += c.values()[j] * x.col(j).dot(ax.col(j));
    out[t] = z;
  }
  return out;
}

/// Discs bounding W_c(A) for a quadratic A: foci mu sum(c) +- sqrt(mu^2+nu) ||c||,
/// axes (s +- |mu^2+nu|/s) ||c||.
inline EllipseDisc scaled_ellipse(const QuadraticSignature& sig, const Coefficients& c, double s,
                                  Closure boundary) {
  const Complex center = sig.mu * c.sum();
  if (s == 0.0) return EllipseDisc::point(center, boundary);
  const Complex offset = std::sqrt(sig.discriminant()) * c.norm_c();
  return {center + offset, center - offset, predicted_major_axis(s, sig.discriminant()) * c.norm_c(),
          boundary};
}

struct SandwichReport {
  EllipseDisc outer;                       // E, closed
  std::optional<EllipseDisc> inner;        // E0, open; present when s0 is supplied
  double max_outer_violation = 0.0;        // max_psi h_Wc - h_E
  std::optional<double> max_inner_violation;  // max_psi h_E0 - h_Wc
  double max_gap = 0.0;                    // max_psi h_E - h_Wc
  ConvexRegion region;                     // the computed W_c table
  bool holds(double tol = 1e-9) const {
    return max_outer_violation <= tol && (!max_inner_violation || *max_inner_violation <= tol);
  }
};

/// Checks E0 within W_c(A) within E along every grid direction.
inline SandwichReport sandwich_check(const ComplexMatrix& a, const QuadraticSignature& sig,
                                     const Coefficients& c, std::optional<double> s0,
                                     std::size_t m = kDefaultAngles, double tol = kQuadraticTol) {
  if (!sig.quadratic(tol)) throw NotQuadratic("residual " + std::to_string(sig.residual));
  SandwichReport rep;
  rep.region = compute_wc(a, c, m);
  rep.outer = scaled_ellipse(sig, c, sig.s, Closure::closed);
  const auto h_outer = support_samples(rep.outer, m);
  rep.max_outer_violation = -std::numeric_limits<double>::infinity();
  rep.max_gap = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    rep.max_outer_violation = std::max(rep.max_outer_violation, rep.region.support[i] - h_outer[i]);
    rep.max_gap = std::max(rep.max_gap, h_outer[i] - rep.region.support[i]);
  }
  if (s0) {
    rep.inner = scaled_ellipse(sig, c, *s0, Closure::open);
    const auto h_inner = support_samples(*rep.inner, m);
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) worst = std::max(worst, h_inner[i] - rep.region.support[i]);
    rep.max_inner_violation = worst;
  }
  return rep;
}

}  // namespace qnr
