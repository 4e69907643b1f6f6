#pragma once

// Shared fixtures: random generators for property tests and closed-form
// oracles that do not go through the library's eigensolvers.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <qnr/qnr.hpp>

namespace qnr::test {

struct Assembly {
  ComplexMatrix a;
  Complex lambda1, lambda2;
  std::vector<double> x;  // non-increasing
  std::size_t d1 = 0, d2 = 0;
};

inline Complex random_complex(CounterRng& rng, double radius) {
  return {rng.uniform(-radius, radius), rng.uniform(-radius, radius)};
}

inline std::size_t random_index(CounterRng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.uniform() * static_cast<double>(hi - lo + 1)) % (hi - lo + 1);
}

// Random U (l1 I + l2 I + [[l1 I, 2X], [0, l2 I]]) U* with n <= max_n and
// well-separated eigenvalues.
inline Assembly random_assembly(CounterRng& rng, std::size_t max_n, bool distinct = true) {
  Assembly s;
  s.lambda1 = random_complex(rng, 2.0);
  do {
    s.lambda2 = distinct ? random_complex(rng, 2.0) : s.lambda1;
  } while (distinct && std::abs(s.lambda1 - s.lambda2) < 0.2);
  const std::size_t n = random_index(rng, 2, max_n);
  const std::size_t d3 = random_index(rng, 1, n / 2);
  const std::size_t rest = n - 2 * d3;
  s.d1 = random_index(rng, 0, rest);
  s.d2 = rest - s.d1;
  for (std::size_t i = 0; i < d3; ++i) s.x.push_back(rng.uniform(0.05, 3.0));
  std::sort(s.x.begin(), s.x.end(), std::greater<>());
  s.a = assemble_canonical(s.lambda1, s.lambda2, s.x, s.d1, s.d2, rng);
  return s;
}

inline std::vector<double> random_coefficients(CounterRng& rng, std::size_t max_k) {
  const std::size_t k = random_index(rng, 1, max_k);
  std::vector<double> c;
  for (std::size_t i = 0; i < k; ++i) {
    double v = 0.0;
    while (std::abs(v) < 0.05) v = rng.uniform(-2.0, 2.0);
    c.push_back(v);
  }
  return c;
}

// Roots of det(tI - H) for Hermitian H with n <= 3 from the characteristic
// polynomial (trigonometric form for the cubic), non-increasing.
inline std::vector<double> charpoly_eigenvalues(const ComplexMatrix& h) {
  const auto n = h.rows();
  auto re = [&](Eigen::Index i, Eigen::Index j) { return h(i, j).real(); };
  if (n == 1) return {re(0, 0)};
  if (n == 2) {
    const double t = re(0, 0) + re(1, 1);
    const double d = re(0, 0) * re(1, 1) - std::norm(h(0, 1));
    const double disc = std::sqrt(std::max(0.0, t * t / 4.0 - d));
    return {t / 2.0 + disc, t / 2.0 - disc};
  }
  // t^3 - c2 t^2 + c1 t - c0
  const double c2 = re(0, 0) + re(1, 1) + re(2, 2);
  const double c1 = re(0, 0) * re(1, 1) + re(0, 0) * re(2, 2) + re(1, 1) * re(2, 2) -
                    std::norm(h(0, 1)) - std::norm(h(0, 2)) - std::norm(h(1, 2));
  const double c0 = (re(0, 0) * re(1, 1) * re(2, 2) + 2.0 * (h(0, 1) * h(1, 2) * h(2, 0)).real() -
                     re(0, 0) * std::norm(h(1, 2)) - re(1, 1) * std::norm(h(0, 2)) -
                     re(2, 2) * std::norm(h(0, 1)));
  const double shift = c2 / 3.0;
  const double p = c1 - c2 * c2 / 3.0;
  const double q = -c0 + c1 * c2 / 3.0 - 2.0 * c2 * c2 * c2 / 27.0;
  std::vector<double> out;
  if (p > -1e-300) {
    out = {shift, shift, shift};
  } else {
    const double r = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) out.push_back(shift + r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0));
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

// Gauss-Legendre nodes and weights on [-1, 1] by Newton on P_n.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

// (1/2pi) int_{-pi}^{pi} e^{i beta theta} e^{-i n theta} d theta by composite
// Gauss-Legendre quadrature.
inline Complex fourier_coefficient_quadrature(double beta, long n) {
  std::vector<double> x, w;
  gauss_legendre(20, x, w);
  const int panels = 64;
  const double pi = std::numbers::pi;
  const double h = 2.0 * pi / panels;
  Complex sum{};
  for (int k = 0; k < panels; ++k) {
    const double a = -pi + k * h;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double theta = a + 0.5 * h * (x[j] + 1.0);
      sum += 0.5 * h * w[j] * std::polar(1.0, (beta - static_cast<double>(n)) * theta);
    }
  }
  return sum / (2.0 * pi);
}

// Closed-form ellipse of a 2x2 matrix: foci at the eigenvalues, minor axis
// sqrt(tr(A*A) - |l1|^2 - |l2|^2).
inline EllipseDisc two_by_two_ellipse(const ComplexMatrix& a) {
  const Complex t = a.trace();
  const Complex d = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  const Complex root = std::sqrt(t * t / 4.0 - d);
  const Complex l1 = t / 2.0 + root, l2 = t / 2.0 - root;
  const double minor2 = std::max(0.0, a.squaredNorm() - std::norm(l1) - std::norm(l2));
  return {l1, l2, std::sqrt(minor2 + std::norm(l1 - l2)), Closure::closed};
}

// Largest singular value by brute force: power iteration on A*A from a fixed start.
inline double power_norm(const ComplexMatrix& a, int iterations = 2000) {
  ComplexVector v = ComplexVector::Ones(a.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) += Complex(0.01 * static_cast<double>(i), 0.003);
  v /= v.norm();
  for (int it = 0; it < iterations; ++it) {
    const ComplexVector w = a.adjoint() * (a * v);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    v = w / nw;
  }
  return (a * v).norm();
}

inline ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

inline ComplexMatrix diag(std::initializer_list<Complex> v) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (const Complex& z : v) m(i, i) = z, ++i;
  return m;
}

}  // namespace qnr::test
