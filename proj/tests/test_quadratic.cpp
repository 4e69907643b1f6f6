#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace qnr;
using namespace qnr::test;
using Catch::Matchers::WithinAbs;

namespace {
const double sqrt2 = std::sqrt(2.0);
}

TEST_CASE("fit_quadratic examples", "[quadratic]") {
  const auto s = fit_quadratic(mat2(1.0, 2.0, 0.0, -1.0));
  CHECK(std::abs(s.mu) < 1e-15);
  CHECK(std::abs(s.nu - Complex(1.0)) < 1e-15);
  CHECK(s.residual == 0.0);
  CHECK_THAT(s.s, WithinAbs(1.0 + sqrt2, 1e-13));
  CHECK(s.quadratic());

  const auto n = fit_quadratic(mat2(0.0, 1.0, 0.0, 0.0));
  CHECK(std::abs(n.mu) < 1e-15);
  CHECK(std::abs(n.nu) < 1e-15);
  CHECK(std::abs(n.lambda1) < 1e-15);
  CHECK(std::abs(n.lambda2) < 1e-15);

  const auto c = fit_quadratic(ComplexMatrix::Identity(3, 3) * 3.0);
  CHECK(std::abs(c.mu - Complex(3.0)) < 1e-15);
  CHECK(std::abs(c.nu - Complex(-9.0)) < 1e-14);
  CHECK(std::abs(c.lambda1 - Complex(3.0)) < 1e-7);
  CHECK(std::abs(c.lambda2 - Complex(3.0)) < 1e-7);
  CHECK(c.s == 0.0);
  CHECK(c.quadratic());
}

TEST_CASE("signature invariants on random assemblies", "[quadratic][property]") {
  CounterRng rng(41);
  for (int t = 0; t < 60; ++t) {
    const Assembly s = random_assembly(rng, 20, t % 5 != 0);
    const auto sig = fit_quadratic(s.a);
    CHECK(sig.residual <= 1e-12);
    CHECK(std::abs(sig.lambda1 + sig.lambda2 - 2.0 * sig.mu) <= 1e-10);
    CHECK(std::abs(sig.lambda1 * sig.lambda2 + sig.nu) <= 1e-10 * std::max(1.0, std::abs(sig.nu)));
    CHECK(sig.s >= std::sqrt(std::abs(sig.discriminant())) - 1e-10);
    // Eigenvalues as a set.
    const bool same = std::abs(sig.lambda1 - s.lambda1) + std::abs(sig.lambda2 - s.lambda2) < 1e-8;
    const bool swapped = std::abs(sig.lambda1 - s.lambda2) + std::abs(sig.lambda2 - s.lambda1) < 1e-8;
    CHECK((same || swapped));
  }
}

TEST_CASE("non-quadratic matrices fail the verdict", "[quadratic]") {
  CounterRng rng(42);
  const auto sig = fit_quadratic(random_complex_matrix(5, 5, rng));
  CHECK_FALSE(sig.quadratic());
  CHECK_THROWS_AS(predict_W(sig), NotQuadratic);
  CHECK_THROWS_AS(canonical_decompose(random_complex_matrix(5, 5, rng), sig), NotQuadratic);
  // Diagonal with three distinct eigenvalues.
  CHECK_FALSE(fit_quadratic(diag({1.0, 2.0, 4.0})).quadratic());
}

TEST_CASE("affine covariance of signatures", "[quadratic][property]") {
  CounterRng rng(43);
  for (int t = 0; t < 30; ++t) {
    const Assembly s = random_assembly(rng, 12);
    const Complex alpha = random_complex(rng, 2.0) + Complex(0.1, 0.0), beta = random_complex(rng, 2.0);
    const auto n = s.a.rows();
    const auto sig = fit_quadratic(s.a);
    const auto moved = fit_quadratic(alpha * s.a + beta * ComplexMatrix::Identity(n, n));
    const Complex e1 = alpha * sig.lambda1 + beta, e2 = alpha * sig.lambda2 + beta;
    const double d = std::min(std::abs(moved.lambda1 - e1) + std::abs(moved.lambda2 - e2),
                              std::abs(moved.lambda1 - e2) + std::abs(moved.lambda2 - e1));
    CHECK(d <= 1e-9);
    CHECK_THAT(moved.s, WithinAbs(std::abs(alpha) * sig.s, 1e-9));
  }
}

TEST_CASE("canonical_decompose examples", "[quadratic]") {
  const ComplexMatrix a = mat2(1.0, 2.0, 0.0, -1.0);
  const auto f = canonical_decompose(a, fit_quadratic(a));
  CHECK(f.dim1 == 0);
  CHECK(f.dim2 == 0);
  CHECK(f.dim3 == 1);
  CHECK_THAT(f.x_values.at(0), WithinAbs(1.0, 1e-12));

  const ComplexMatrix d = diag({1.0, -1.0});
  const auto g = canonical_decompose(d, fit_quadratic(d));
  CHECK(g.dim1 == 1);
  CHECK(g.dim2 == 1);
  CHECK(g.dim3 == 0);

  const ComplexMatrix j = mat2(0.0, 2.0, 0.0, 0.0);
  const auto h = canonical_decompose(j, fit_quadratic(j));
  CHECK(h.dim3 == 1);
  CHECK(h.dim1 + h.dim2 == 0);
  CHECK_THAT(h.x_values.at(0), WithinAbs(1.0, 1e-12));
}

TEST_CASE("decompose inverts assemble", "[quadratic][property]") {
  CounterRng rng(44);
  for (int t = 0; t < 60; ++t) {
    const bool distinct = t % 4 != 0;
    const Assembly s = random_assembly(rng, 24, distinct);
    const auto sig = fit_quadratic(s.a);
    const auto f = canonical_decompose(s.a, sig);
    const auto n = s.a.rows();
    CHECK(f.dim1 + f.dim2 + 2 * f.dim3 == static_cast<std::size_t>(n));
    CHECK((f.unitary.adjoint() * f.unitary - ComplexMatrix::Identity(n, n)).norm() <= 1e-9);
    CHECK((f.unitary.adjoint() * s.a * f.unitary - reassemble(f)).norm() <= 1e-8 * tolerance_scale(s.a));
    REQUIRE(f.x_values.size() == s.x.size());
    for (std::size_t i = 0; i < s.x.size(); ++i) CHECK_THAT(f.x_values[i], WithinAbs(s.x[i], 1e-8));
    if (distinct) {
      const bool same = std::abs(f.lambda1 - s.lambda1) < 1e-8;
      CHECK((same ? f.dim1 : f.dim2) == s.d1);
      CHECK((same ? f.dim2 : f.dim1) == s.d2);
    }
    // Two derivations of the major axis.
    const double from_x = 2.0 * std::sqrt(f.x_max() * f.x_max() + std::abs(sig.discriminant()));
    CHECK_THAT(predict_W(sig).ellipse.major_axis(), WithinAbs(from_x, 1e-9));
  }
}

TEST_CASE("assemble_canonical fixtures", "[quadratic]") {
  const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
  CHECK((assemble_canonical(1.0, -1.0, {1.0}, 0, 0, id2) - mat2(1.0, 2.0, 0.0, -1.0)).norm() == 0.0);
  CHECK((assemble_canonical(1.0, -1.0, {}, 1, 1, id2) - diag({1.0, -1.0})).norm() == 0.0);
  CHECK_THROWS_AS(assemble_canonical(1.0, -1.0, {0.0}, 0, 0, id2), InvalidParameter);
  CHECK_THROWS_AS(assemble_canonical(1.0, -1.0, {1.0}, 1, 0, id2), InvalidParameter);
  CounterRng rng(45);
  CHECK(fit_quadratic(assemble_canonical(Complex(0.3, 1.0), Complex(-2.0, 0.5), {2.0, 0.4}, 3, 2, rng)).residual <= 1e-12);
}

TEST_CASE("predict_W examples", "[quadratic]") {
  const auto p = predict_W(fit_quadratic(mat2(1.0, 2.0, 0.0, -1.0)));
  CHECK_THAT(p.ellipse.major_axis(), WithinAbs(2.0 * sqrt2, 1e-13));
  CHECK_THAT(p.ellipse.minor_axis(), WithinAbs(2.0, 1e-12));
  CHECK(p.attained == Attainment::yes);
  CHECK(p.ellipse.boundary() == Closure::closed);
  const double f = std::min(std::abs(p.ellipse.focus1() - Complex(1.0)), std::abs(p.ellipse.focus2() - Complex(1.0)));
  CHECK(f < 1e-14);

  const auto seg = predict_W(fit_quadratic(diag({1.0, -1.0})));
  CHECK_THAT(seg.ellipse.major_axis(), WithinAbs(2.0, 1e-13));
  CHECK_THAT(seg.ellipse.minor_axis(), WithinAbs(0.0, 1e-6));

  const auto pt = predict_W(fit_quadratic(ComplexMatrix::Identity(2, 2) * 3.0));
  CHECK(pt.ellipse.major_axis() == 0.0);
  CHECK(std::abs(pt.ellipse.center() - Complex(3.0)) == 0.0);
}

TEST_CASE("predict_Wess examples", "[quadratic]") {
  QuadraticSignature inv;
  inv.mu = 0.0;
  inv.nu = 1.0;
  inv.lambda1 = 1.0;
  inv.lambda2 = -1.0;
  const auto seg = predict_Wess(inv, 1.0);
  CHECK_THAT(seg.ellipse.major_axis(), WithinAbs(2.0, 1e-15));
  CHECK(seg.ellipse.minor_axis() == 0.0);
  CHECK(seg.ellipse.boundary() == Closure::closed);
  CHECK(seg.source == PredictionSource::essential);

  const auto comp = predict_Wess(inv, std::sqrt(3.0));
  CHECK_THAT(comp.ellipse.major_axis(), WithinAbs(4.0 / std::sqrt(3.0), 1e-12));
  CHECK_THAT(comp.ellipse.major_axis(), WithinAbs(2.0 / std::sqrt(0.75), 1e-12));

  QuadraticSignature zero;
  const auto pt = predict_Wess(zero, 0.0);
  CHECK(pt.ellipse.major_axis() == 0.0);
  CHECK(pt.ellipse.center() == Complex(0.0));
  CHECK_THROWS_AS(predict_Wess(zero, -1.0), InvalidParameter);
  zero.residual = 1.0;
  CHECK_THROWS_AS(predict_Wess(zero, 1.0), NotQuadratic);
}

TEST_CASE("classify_closed", "[quadratic]") {
  CHECK(classify_closed(2.0, 1.0, std::nullopt) == Closure::closed);
  CHECK(classify_closed(std::sqrt(3.0), std::sqrt(3.0), 0, 1) == Closure::open);
  CHECK(classify_closed(1.5, 1.5, std::nullopt) == Closure::unknown);
  CHECK(classify_closed(1.5, 1.5, 2, 2) == Closure::closed);
  CHECK(classify_closed(1.5, 1.5, 1, 2) == Closure::open);
  CHECK_THROWS_AS(classify_closed(1.0, 2.0, std::nullopt), InvalidNorms);
}

TEST_CASE("projection and involution norm identity", "[quadratic][property]") {
  const ComplexMatrix a = mat2(1.0, 2.0, 0.0, -1.0);
  const auto r = projection_involution_check(a, fit_quadratic(a));
  CHECK_THAT(r.lhs, WithinAbs(sqrt2, 1e-12));
  CHECK_THAT(r.rhs, WithinAbs(sqrt2, 1e-12));

  const ComplexMatrix d = diag({1.0, -1.0});
  const auto q = projection_involution_check(d, fit_quadratic(d));
  CHECK_THAT(q.lhs, WithinAbs(1.0, 1e-12));
  CHECK_THAT(q.rhs, WithinAbs(1.0, 1e-12));

  CounterRng rng(46);
  for (int t = 0; t < 40; ++t) {
    const Assembly s = random_assembly(rng, 16);
    const auto id = projection_involution_check(s.a, fit_quadratic(s.a));
    CHECK_THAT(id.lhs, WithinAbs(id.rhs, 1e-9));
  }
  const ComplexMatrix j = mat2(0.0, 1.0, 0.0, 0.0);
  CHECK_THROWS_AS(projection_involution_check(j, fit_quadratic(j)), DegenerateEigenvalues);
}

TEST_CASE("estimate_ess_norm on model families", "[quadratic]") {
  const TruncationFamily comp{"composition", [](std::size_t n) { return composition_matrix(0.5, n); }};
  const auto c = estimate_ess_norm(comp, {32, 64, 128, 256});
  CHECK_THAT(c.estimate, WithinAbs(std::sqrt(3.0), 0.05));
  CHECK(c.sequence.size() == 4);
  CHECK_FALSE(c.non_monotone_warning);

  const TruncationFamily alt{"alternating", [](std::size_t n) {
                               ComplexMatrix m = ComplexMatrix::Zero(n, n);
                               for (std::size_t i = 0; i < n; ++i) m(i, i) = (i % 2 == 0) ? 1.0 : -1.0;
                               return m;
                             }};
  CHECK_THAT(estimate_ess_norm(alt, {8, 16, 32}).estimate, WithinAbs(1.0, 1e-14));

  const TruncationFamily bump{"rank-one", [](std::size_t n) {
                                ComplexMatrix m = ComplexMatrix::Identity(n, n);
                                m(0, 0) = 2.0;
                                return m;
                              }};
  const auto b = estimate_ess_norm(bump, {8, 16, 32});
  CHECK_THAT(b.estimate, WithinAbs(1.0, 1e-14));
  CHECK_THAT(spectral_norm(bump.section(8)), WithinAbs(2.0, 1e-14));

  const TruncationFamily wobble{"wobble", [](std::size_t n) {
                                  return ComplexMatrix(ComplexMatrix::Identity(n, n) * ((n / 8) % 2 == 0 ? 2.0 : 1.0));
                                }};
  CHECK(estimate_ess_norm(wobble, {8, 16, 24}).non_monotone_warning);

  CHECK_THROWS_AS(estimate_ess_norm(alt, {8, 16}), InvalidParameter);
  CHECK_THROWS_AS(estimate_ess_norm(alt, {8, 16, 12}), InvalidParameter);
  CHECK_THROWS_AS(estimate_ess_norm(alt, {8, 16, 32}, 1.0), InvalidParameter);
}
