#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <type_traits>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"

namespace qnr {

inline constexpr std::size_t kDefaultAngles = 720;

enum class Closure { closed, open, unknown };

inline const char* to_string(Closure c) {
  switch (c) {
    case Closure::closed: return "closed";
    case Closure::open: return "open";
    case Closure::unknown: return "unknown";
  }
  return "unknown";
}

/// Elliptical disc given by its foci and the length of its major axis.
///
/// Segments (minor axis 0) and points (major axis 0, equal foci) are valid
/// discs. The minor axis is always derived from the other two parameters.
class EllipseDisc {
 public:
  EllipseDisc() = default;

  EllipseDisc(Complex focus1, Complex focus2, double major_axis,
              Closure boundary = Closure::unknown)
      : focus1_(focus1), focus2_(focus2), major_(major_axis), boundary_(boundary) {
    if (!std::isfinite(major_axis) || !std::isfinite(focus1.real()) ||
        !std::isfinite(focus1.imag()) || !std::isfinite(focus2.real()) ||
        !std::isfinite(focus2.imag()))
      throw InvalidEllipse("non-finite ellipse parameters");
    const double d = std::abs(focus2 - focus1);
    if (major_axis < d - 1e-12 * std::max(1.0, d))
      throw InvalidEllipse("major axis " + std::to_string(major_axis) +
                           " shorter than focal distance " + std::to_string(d));
    major_ = std::max(major_axis, d);
  }

  static EllipseDisc point(Complex z, Closure boundary = Closure::closed) {
    return {z, z, 0.0, boundary};
  }

  Complex focus1() const { return focus1_; }
  Complex focus2() const { return focus2_; }
  Complex center() const { return 0.5 * (focus1_ + focus2_); }
  double major_axis() const { return major_; }
  double focal_distance() const { return std::abs(focus2_ - focus1_); }
  double minor_axis() const {
    const double d = focal_distance();
    return std::sqrt(std::max(0.0, (major_ - d) * (major_ + d)));
  }
  double semi_major() const { return 0.5 * major_; }
  double semi_minor() const { return 0.5 * minor_axis(); }
  /// Direction of the major axis; 0 when the foci coincide.
  double direction() const { return focus1_ == focus2_ ? 0.0 : std::arg(focus2_ - focus1_); }
  Closure boundary() const { return boundary_; }

  EllipseDisc with_boundary(Closure b) const {
    EllipseDisc e = *this;
    e.boundary_ = b;
    return e;
  }

 private:
  Complex focus1_{};
  Complex focus2_{};
  double major_ = 0.0;
  Closure boundary_ = Closure::unknown;
};

/// Support function h_E(psi) = sup { Re(e^{-i psi} z) : z in E }.
inline double ellipse_support(const EllipseDisc& e, double psi) {
  const double a = e.semi_major();
  const double b = e.semi_minor();
  const double t = psi - e.direction();
  const double c = std::cos(t), s = std::sin(t);
  return std::real(e.center() * std::polar(1.0, -psi)) + std::sqrt(a * a * c * c + b * b * s * s);
}

enum class Location { inside, boundary, outside };

inline const char* to_string(Location l) {
  switch (l) {
    case Location::inside: return "inside";
    case Location::boundary: return "boundary";
    case Location::outside: return "outside";
  }
  return "outside";
}

/// Classifies z by its focal-distance sum against the major axis.
inline Location ellipse_contains(const EllipseDisc& e, Complex z, double tol = 1e-9) {
  const double excess = std::abs(z - e.focus1()) + std::abs(z - e.focus2()) - e.major_axis();
  if (excess < -tol) return Location::inside;
  if (excess <= tol) return Location::boundary;
  return Location::outside;
}

/// psi_i = 2 pi i / m, i = 0..m-1.
inline std::vector<double> angle_grid(std::size_t m) {
  std::vector<double> g(m);
  for (std::size_t i = 0; i < m; ++i)
    g[i] = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(m);
  return g;
}

/// Convex compact set sampled through its support function on a uniform
/// angle grid, with one boundary witness per angle.
struct ConvexRegion {
  std::vector<double> angles;
  std::vector<double> support;
  std::vector<Complex> witnesses;

  std::size_t size() const { return angles.size(); }
};

/// Largest amount by which any witness violates any sampled half-plane.
inline double max_witness_violation(const ConvexRegion& r) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r.size(); ++i) {
    const Complex rot = std::polar(1.0, -r.angles[i]);
    for (const Complex& z : r.witnesses) worst = std::max(worst, std::real(rot * z) - r.support[i]);
  }
  return worst;
}

/// Membership in the outer approximation (intersection of sampled half-planes).
inline Location outer_contains(const ConvexRegion& r, Complex z, double tol = 1e-8) {
  double excess = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r.size(); ++i)
    excess = std::max(excess, std::real(std::polar(1.0, -r.angles[i]) * z) - r.support[i]);
  if (excess < -tol) return Location::inside;
  if (excess <= tol) return Location::boundary;
  return Location::outside;
}

/// Smallest width h(psi) + h(psi + pi) over the grid; the grid size must be even.
inline double min_width(const ConvexRegion& r) {
  const std::size_t m = r.size();
  if (m == 0 || m % 2 != 0) throw GridMismatch("min_width needs an even, non-empty grid");
  double w = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m / 2; ++i) w = std::min(w, r.support[i] + r.support[i + m / 2]);
  return w;
}

/// Width along the real axis, h(0) + h(pi); the grid size must be even.
inline double real_axis_width(const ConvexRegion& r) {
  const std::size_t m = r.size();
  if (m == 0 || m % 2 != 0) throw GridMismatch("real_axis_width needs an even, non-empty grid");
  return r.support[0] + r.support[m / 2];
}

inline std::vector<double> support_samples(const ConvexRegion& r, std::size_t m) {
  if (r.size() != m || r.support.size() != m)
    throw GridMismatch("region sampled on " + std::to_string(r.size()) + " angles, expected " +
                       std::to_string(m));
  return r.support;
}

inline std::vector<double> support_samples(const EllipseDisc& e, std::size_t m) {
  std::vector<double> h(m);
  const auto grid = angle_grid(m);
  for (std::size_t i = 0; i < m; ++i) h[i] = ellipse_support(e, grid[i]);
  return h;
}

template <class T>
concept SupportSampled = requires(const T& t, std::size_t m) {
  { support_samples(t, m) } -> std::same_as<std::vector<double>>;
};

/// max_i |h_A(psi_i) - h_B(psi_i)| over the m-point grid. For convex compacts
/// this is the Hausdorff distance up to grid error.
template <SupportSampled A, SupportSampled B>
double hausdorff_support(const A& a, const B& b, std::size_t m) {
  const auto ha = support_samples(a, m);
  const auto hb = support_samples(b, m);
  double d = 0.0;
  for (std::size_t i = 0; i < m; ++i) d = std::max(d, std::abs(ha[i] - hb[i]));
  return d;
}

template <SupportSampled A, SupportSampled B>
double hausdorff_support(const A& a, const B& b) {
  if constexpr (std::is_same_v<A, ConvexRegion>) return hausdorff_support(a, b, a.size());
  else if constexpr (std::is_same_v<B, ConvexRegion>) return hausdorff_support(a, b, b.size());
  else return hausdorff_support(a, b, kDefaultAngles);
}

/// Support table of an ellipse; witnesses are the tangency points.
inline ConvexRegion sample_ellipse(const EllipseDisc& e, std::size_t m) {
  ConvexRegion r;
  r.angles = angle_grid(m);
  r.support.resize(m);
  r.witnesses.resize(m);
  const double a = e.semi_major(), b = e.semi_minor(), tau = e.direction();
  const Complex axis = std::polar(1.0, tau);
  for (std::size_t i = 0; i < m; ++i) {
    const double t = r.angles[i] - tau;
    const double c = std::cos(t), s = std::sin(t);
    const double norm = std::sqrt(a * a * c * c + b * b * s * s);
    const Complex local = norm > 0.0 ? Complex(a * a * c / norm, b * b * s / norm) : Complex{};
    r.witnesses[i] = e.center() + axis * local;
    r.support[i] = ellipse_support(e, r.angles[i]);
  }
  return r;
}

}  // namespace qnr
