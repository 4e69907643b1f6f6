#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "linalg.hpp"
#include "quadratic.hpp"

namespace qnr {

// Finite-section models and closed-form predictors for concrete involutions:
// composition operators on H^2, Hankel operators of power-weight symbols, and
// the Cauchy singular integral operator. All involutions here have mu = 0,
// nu = 1, so their ranges are discs with foci +-1 and axes ||A|| +- ||A||^{-1}.

struct PredictorResult {
  std::optional<double> norm;  // unknown when no closed form applies
  double ess_norm = 1.0;
  std::optional<EllipseDisc> ellipse_W;
  EllipseDisc ellipse_Wess;
  Attainment attained = Attainment::unknown;
  std::string provenance;
};

/// Disc with foci +-1 and major axis t + 1/t.
inline EllipseDisc involution_ellipse(double t, Closure boundary) {
  return {Complex(1.0, 0.0), Complex(-1.0, 0.0), t + 1.0 / t, boundary};
}

namespace detail {

inline void require_disc_point(Complex p) {
  if (!(std::abs(p) <= 1.0 - 1e-9)) throw InvalidParameter("|p| must be < 1");
}

inline double cot(double x) { return std::cos(x) / std::sin(x); }

}  // namespace detail

/// Taylor coefficients of phi(z) = (p - z)/(1 - conj(p) z) up to degree n-1:
/// phi_0 = p, phi_k = -(1 - |p|^2) conj(p)^{k-1}.
inline std::vector<Complex> involution_symbol_coefficients(Complex p, std::size_t n) {
  std::vector<Complex> phi(n);
  if (n == 0) return phi;
  phi[0] = p;
  const double scale = 1.0 - std::norm(p);
  Complex power(1.0, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    phi[k] = -scale * power;
    power *= std::conj(p);
  }
  return phi;
}

/// N x N section of C_phi on H^2 in the monomial basis: entry (m, n) is the
/// coefficient of z^m in phi(z)^n.
inline ComplexMatrix composition_matrix(Complex p, std::size_t n) {
  detail::require_disc_point(p);
  if (n == 0) throw InvalidParameter("size must be positive");
  const std::vector<Complex> phi = involution_symbol_coefficients(p, n);
  const auto nn = static_cast<Eigen::Index>(n);
  ComplexMatrix m = ComplexMatrix::Zero(nn, nn);
  std::vector<Complex> col(n, Complex{}), next(n);
  col[0] = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t r = 0; r < n; ++r) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = col[r];
    // next = col * phi, truncated at degree n-1
    for (std::size_t r = 0; r < n; ++r) {
      Complex acc{};
      for (std::size_t k = 0; k <= r; ++k) acc += col[k] * phi[r - k];
      next[r] = acc;
    }
    col.swap(next);
  }
  return m;
}

/// Norm sqrt((1+|p|)/(1-|p|)) equals the essential norm; the norm is attained
/// only for p = 0, so W is the open disc E_p for p != 0 and W_ess its closure.
inline PredictorResult composition_predict(Complex p) {
  detail::require_disc_point(p);
  const double a = std::abs(p);
  const double norm = std::sqrt((1.0 + a) / (1.0 - a));
  PredictorResult r;
  r.norm = norm;
  r.ess_norm = norm;
  r.attained = a == 0.0 ? Attainment::yes : Attainment::no;
  r.ellipse_W = involution_ellipse(norm, a == 0.0 ? Closure::closed : Closure::open);
  r.ellipse_Wess = involution_ellipse(norm, Closure::closed);
  r.provenance = "composition-hardy";
  return r;
}

/// Closed-form major axis 2 / sqrt(1 - |p|^2) of W(C_phi).
inline double composition_major_axis(Complex p) { return 2.0 / std::sqrt(1.0 - std::norm(p)); }

struct HankelModel {
  double beta = 0.0;
  std::size_t n = 0;
  std::vector<double> coeffs;  // coeffs[j] = c_{j+1}, j = 0 .. 2n-2

  /// H[m][k] = c_{m+k+1}.
  ComplexMatrix matrix() const {
    const auto nn = static_cast<Eigen::Index>(n);
    ComplexMatrix h(nn, nn);
    for (Eigen::Index m = 0; m < nn; ++m)
      for (Eigen::Index k = 0; k < nn; ++k) h(m, k) = coeffs[static_cast<std::size_t>(m + k)];
    return h;
  }
};

/// Fourier coefficient (1/2pi) int_{-pi}^{pi} e^{i beta theta} e^{-i n theta} d theta.
inline double power_weight_coefficient(double beta, long n) {
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return sign * std::sin(std::numbers::pi * beta) / (std::numbers::pi * (beta - static_cast<double>(n)));
}

/// Hankel section for omega(t) = t^beta, branch cut at t = -1.
inline HankelModel power_weight_hankel(double beta, std::size_t n) {
  if (!(std::abs(beta) > 0.0 && std::abs(beta) < 1.0))
    throw InvalidParameter("beta must satisfy 0 < |beta| < 1");
  if (n == 0) throw InvalidParameter("size must be positive");
  HankelModel h{beta, n, {}};
  h.coeffs.resize(2 * n - 1);
  for (std::size_t j = 0; j < h.coeffs.size(); ++j)
    h.coeffs[j] = power_weight_coefficient(beta, static_cast<long>(j + 1));
  return h;
}

/// Distance from t^beta to H^infinity: sin(pi |beta|).
inline double power_weight_distance(double beta) { return std::sin(std::numbers::pi * std::abs(beta)); }

/// ||S|| on the weighted space from ||H_omega||: sqrt((1+h)/(1-h)).
inline double singular_norm_from_hankel(double h) {
  if (!(h >= 0.0)) throw InvalidParameter("Hankel norm must be non-negative");
  if (h >= 1.0) throw WeightNotAdmissible("||H_omega|| = " + std::to_string(h) + " >= 1");
  return std::sqrt((1.0 + h) / (1.0 - h));
}

/// One exponent of sign opposite to all others whose magnitude is at least
/// the magnitude of their sum (trivially true for a single node).
inline bool dominant_node_condition(const std::vector<double>& betas) {
  if (betas.size() == 1) return true;
  for (std::size_t i = 0; i < betas.size(); ++i) {
    double others = 0.0;
    bool opposite = true;
    for (std::size_t j = 0; j < betas.size(); ++j) {
      if (j == i) continue;
      if (betas[j] * betas[i] >= 0.0) opposite = false;
      others += betas[j];
    }
    if (opposite && std::abs(betas[i]) >= std::abs(others)) return true;
  }
  return false;
}

/// Power weight prod |t - t_j|^{beta_j}: ||S||_ess = cot(pi (1 - 2 max|beta_j|) / 4),
/// independent of the node positions; equal to ||S|| under the dominant-node
/// condition, in which case the norm is not attained.
inline PredictorResult power_weight_predict(const std::vector<double>& betas, bool one_node_dominant) {
  if (betas.empty()) throw InvalidParameter("need at least one exponent");
  double top = 0.0;
  for (double b : betas) {
    if (!(b != 0.0 && std::abs(b) < 0.5)) throw InvalidParameter("exponents must satisfy 0 < |beta| < 1/2");
    top = std::max(top, std::abs(b));
  }
  PredictorResult r;
  r.ess_norm = detail::cot(std::numbers::pi * (1.0 - 2.0 * top) / 4.0);
  r.ellipse_Wess = involution_ellipse(r.ess_norm, Closure::closed);
  r.provenance = "power-weight-essential";
  if (one_node_dominant) {
    r.norm = r.ess_norm;
    r.attained = Attainment::no;
    r.ellipse_W = involution_ellipse(r.ess_norm, Closure::open);
    r.provenance = "power-weight-dominant-node";
  }
  return r;
}

/// Cauchy singular integral operator on the unit circle in the Fourier basis,
/// modes -floor(N/2) .. N-1-floor(N/2): +1 on analytic modes, -1 otherwise.
inline ComplexMatrix cauchy_circle(std::size_t n) {
  if (n < 2) throw InvalidParameter("size must be at least 2");
  const auto nn = static_cast<Eigen::Index>(n);
  const auto offset = static_cast<Eigen::Index>(n / 2);
  ComplexMatrix s = ComplexMatrix::Zero(nn, nn);
  for (Eigen::Index i = 0; i < nn; ++i) s(i, i) = (i - offset >= 0) ? 1.0 : -1.0;
  return s;
}

struct BundlePrediction {
  double norm_lower = 0.0;        // cot(pi / 4m)
  double major_axis_lower = 0.0;  // 2 csc(pi / 2m)
  bool equality = false;          // bounds are exact for m = 1, 2, 3
};

/// Bundle of m lines through a point (or m circles through two points).
inline BundlePrediction bundle_predict(unsigned m) {
  if (m == 0) throw InvalidParameter("m must be positive");
  const double md = static_cast<double>(m);
  return {detail::cot(std::numbers::pi / (4.0 * md)), 2.0 / std::sin(std::numbers::pi / (2.0 * md)),
          m <= 3};
}

struct ArcsPrediction {
  double d = 0.0;      // sup_{xi >= 0} sinh(pi phi xi) / cosh(pi xi)
  double xi_max = 0.0;
  PredictorResult result;
};

/// Two circular arcs meeting at angle pi (1 - phi): ||S|| = ||S||_ess = D + sqrt(D^2 + 1).
inline ArcsPrediction arcs_predict(double phi) {
  if (!(phi > 0.0 && phi < 1.0)) throw InvalidParameter("phi must lie in (0, 1)");
  const double pi = std::numbers::pi;
  auto objective = [&](double xi) { return std::sinh(pi * phi * xi) / std::cosh(pi * xi); };
  // Beyond this bracket the objective decays like e^{-pi (1 - phi) xi}.
  double lo = 0.0, hi = 10.0 / (pi * (1.0 - phi));
  const double inv_golden = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_golden * (hi - lo), x2 = lo + inv_golden * (hi - lo);
  double f1 = objective(x1), f2 = objective(x2);
  while (hi - lo > 1e-10) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_golden * (hi - lo);
      f2 = objective(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_golden * (hi - lo);
      f1 = objective(x1);
    }
  }
  ArcsPrediction out;
  out.xi_max = 0.5 * (lo + hi);
  out.d = objective(out.xi_max);
  const double norm = out.d + std::sqrt(out.d * out.d + 1.0);
  out.result.norm = norm;
  out.result.ess_norm = norm;
  out.result.attained = Attainment::unknown;
  out.result.ellipse_W = EllipseDisc(Complex(1.0, 0.0), Complex(-1.0, 0.0),
                                     2.0 * std::sqrt(out.d * out.d + 1.0), Closure::unknown);
  out.result.ellipse_Wess = out.result.ellipse_W->with_boundary(Closure::closed);
  out.result.provenance = "two-arc-curve";
  return out;
}

/// C_phi on the Dirichlet space: ||C_phi|| = (sqrt(L) + sqrt(4 + L)) / 2 with
/// L = -log(1 - |p|^2), attained; essential norm 1.
inline PredictorResult dirichlet_predict(Complex p) {
  detail::require_disc_point(p);
  const double l = -std::log1p(-std::norm(p));
  const double norm = 0.5 * (std::sqrt(l) + std::sqrt(4.0 + l));
  PredictorResult r;
  r.norm = norm;
  r.ess_norm = 1.0;
  r.attained = Attainment::yes;
  r.ellipse_W = EllipseDisc(Complex(1.0, 0.0), Complex(-1.0, 0.0), std::sqrt(4.0 + l), Closure::closed);
  r.ellipse_Wess = involution_ellipse(1.0, Closure::closed);
  r.provenance = "composition-dirichlet";
  return r;
}

struct WeightedCompositionNorm {
  double m = 0.0;
  Attainment attained = Attainment::unknown;
  double t_max = 0.0;  // angle of the maximizer
};

/// M = sqrt(1-|p|^2) sup_t rho(phi(t)) / (|p - t| rho(t)) over a uniform grid on
/// the circle, refined twice around the best grid point. A grid maximum can
/// only underestimate the supremum. The norm is attained iff the objective is
/// constant, tested to 1e-8 relative on the grid.
inline WeightedCompositionNorm weighted_composition_norm(Complex p, const std::function<double(Complex)>& rho,
                                                         std::size_t grid = 4096) {
  detail::require_disc_point(p);
  if (grid < 8) throw InvalidParameter("grid must have at least 8 points");
  const double scale = std::sqrt(1.0 - std::norm(p));
  auto objective = [&](double theta) {
    const Complex t = std::polar(1.0, theta);
    const Complex image = (p - t) / (1.0 - std::conj(p) * t);
    const double rt = rho(t), ri = rho(image);
    if (!(rt > 0.0) || !(ri > 0.0) || !std::isfinite(rt) || !std::isfinite(ri))
      throw InvalidParameter("weight must be finite and strictly positive");
    const double ratio = ri / rt;
    if (!std::isfinite(ratio) || ratio > 1e150)
      throw UnboundedModel("rho(phi(t)) / rho(t) exceeds the overflow guard");
    return scale * ratio / std::abs(p - t);
  };
  const double step = 2.0 * std::numbers::pi / static_cast<double>(grid);
  double best = -1.0, worst = std::numeric_limits<double>::infinity(), best_theta = 0.0;
  for (std::size_t i = 0; i < grid; ++i) {
    const double theta = step * static_cast<double>(i);
    const double v = objective(theta);
    if (v > best) {
      best = v;
      best_theta = theta;
    }
    worst = std::min(worst, v);
  }
  WeightedCompositionNorm out;
  out.attained = (best - worst) <= 1e-8 * best ? Attainment::yes : Attainment::no;

  double half = step;
  for (int pass = 0; pass < 2; ++pass) {
    constexpr int kSub = 64;
    const double center = best_theta;
    for (int j = -kSub; j <= kSub; ++j) {
      const double theta = center + half * static_cast<double>(j) / kSub;
      const double v = objective(theta);
      if (v > best) {
        best = v;
        best_theta = theta;
      }
    }
    half /= kSub;
  }
  out.m = best;
  out.t_max = best_theta;
  return out;
}

}  // namespace qnr
