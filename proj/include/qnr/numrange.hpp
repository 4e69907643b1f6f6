#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "geometry.hpp"
#include "linalg.hpp"
#include "parallel.hpp"
#include "random.hpp"

namespace qnr {

struct SupportPoint {
  double h = 0.0;   // top eigenvalue of Re(e^{-i psi} A)
  Complex witness;  // <Av, v> for the corresponding unit eigenvector v
};

/// Support table of W(A): witnesses are Rayleigh quotients, hence points of W(A)
/// lying on the sampled support lines.
using SupportTable = ConvexRegion;

inline SupportPoint support_value(const ComplexMatrix& a, double psi) {
  require_operator(a);
  const detail::TopEigenpair top = detail::top_eigenpair(rotated_real_part(a, psi));
  return {top.value, top.vector.dot(a * top.vector)};
}

/// Samples W(A) on an m-point outer-normal grid. The sweep is split across
/// `workers` threads (0 = default); results are assembled by grid index.
inline SupportTable compute_range(const ComplexMatrix& a, std::size_t m = kDefaultAngles,
                                  unsigned workers = 0) {
  require_operator(a);
  if (m < 8) throw InvalidParameter("compute_range needs at least 8 angles");
  SupportTable t;
  t.angles = angle_grid(m);
  t.support.resize(m);
  t.witnesses.resize(m);
  parallel_for(
      m,
      [&](std::size_t i) {
        const SupportPoint p = support_value(a, t.angles[i]);
        t.support[i] = p.h;
        t.witnesses[i] = p.witness;
      },
      workers);
  return t;
}

/// Rayleigh quotients <Ax, x> of `trials` random unit vectors (normalized
/// complex Gaussians). Trial k draws from stream k of the seed.
inline std::vector<Complex> sample_oracle(const ComplexMatrix& a, std::size_t trials,
                                          std::uint64_t seed) {
  require_operator(a);
  if (trials == 0) throw InvalidParameter("sample_oracle needs at least one trial");
  const CounterRng master(seed);
  std::vector<Complex> out(trials);
  const Eigen::Index n = a.rows();
  for (std::size_t k = 0; k < trials; ++k) {
    CounterRng rng = master.split(k);
    ComplexVector x(n);
    double norm = 0.0;
    while (norm == 0.0) {
      for (Eigen::Index i = 0; i < n; ++i) x(i) = rng.complex_normal();
      norm = x.norm();
    }
    x /= norm;
    out[k] = x.dot(a * x);
  }
  return out;
}

}  // namespace qnr
