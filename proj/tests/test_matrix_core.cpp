#include <doctest.h>

#include <cmath>

#include "specflow/eigh.hpp"
#include "specflow/generators.hpp"
#include "specflow/propagator.hpp"
#include "specflow/svd.hpp"

using namespace specflow;

namespace {

HermitianBlock real_diag(std::initializer_list<double> d) {
  return HermitianBlock(ComplexMatrix::diag_real(std::vector<double>(d)), 1e-12);
}

}  // namespace

TEST_CASE("eigh on diagonal and Pauli-x") {
  const EigenSystem es = eigh(real_diag({3.0, 1.0, 2.0}));
  CHECK(es.values[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(es.values[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(es.values[2] == doctest::Approx(3.0).epsilon(1e-14));

  ComplexMatrix sx(2, 2);
  sx(0, 1) = 1.0;
  sx(1, 0) = 1.0;
  const EigenSystem px = eigh(HermitianBlock(sx));
  CHECK(px.values[0] == doctest::Approx(-1.0));
  CHECK(px.values[1] == doctest::Approx(1.0));
  const double r = 1.0 / std::sqrt(2.0);
  // (1, -1)/sqrt(2) and (1, 1)/sqrt(2) up to the deterministic phase fix.
  CHECK(std::abs(px.vectors(0, 0)) == doctest::Approx(r));
  CHECK(std::abs(px.vectors(1, 0)) == doctest::Approx(r));
  CHECK(std::abs(px.vectors(0, 0) + px.vectors(1, 0)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(px.vectors(0, 1) - px.vectors(1, 1)) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("eigh reconstruction residual up to dim 32") {
  Rng rng(11);
  for (int dim : {2, 4, 8, 16, 32}) {
    const ComplexMatrix m = random_hermitian(rng, dim, 3.0);
    const HermitianBlock b(m, 1e-10);
    const EigenSystem es = eigh(b);
    const double resid = max_abs_diff(eigen_reconstruct(es), b.matrix);
    CHECK(resid < 1e-10 * std::max(1.0, b.matrix.frobenius_norm()));
    const double orth =
        max_abs_diff(es.vectors.adjoint() * es.vectors, ComplexMatrix::identity(dim));
    CHECK(orth < 1e-12);
  }
}

TEST_CASE("eigh is deterministic for identical input bits") {
  Rng rng(5);
  const ComplexMatrix m = random_hermitian(rng, 8, 2.0);
  const EigenSystem a = eigh(HermitianBlock(m));
  const EigenSystem b = eigh(HermitianBlock(m));
  CHECK(max_abs_diff(a.vectors, b.vectors) == 0.0);
  for (size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == b.values[i]);
}

TEST_CASE("eigh rejects non-Hermitian input") {
  ComplexMatrix m(2, 2);
  m(0, 1) = 1.0;  // strictly upper triangular
  CHECK_THROWS_AS(HermitianBlock(m, 1e-12), Error);
}

TEST_CASE("spectral projector on diag(-1,0,1)") {
  const HermitianBlock b = real_diag({-1.0, 0.0, 1.0});
  const ComplexMatrix p = spectral_projector(b, -0.5, 0.5);
  CHECK(std::abs(p(0, 0)) < 1e-12);
  CHECK(std::abs(p(1, 1) - 1.0) < 1e-12);
  CHECK(std::abs(p(2, 2)) < 1e-12);

  // P^2 = P = P*.
  CHECK(max_abs_diff(p * p, p) < 1e-10);
  CHECK(max_abs_diff(p.adjoint(), p) < 1e-10);

  // Endpoint exactly on an eigenvalue: the sampled/matrix path must refuse
  // and ask for a shifted window.
  CHECK_THROWS_AS(spectral_projector(b, 0.0, 2.0), Error);

  // Whole real line gives the identity.
  const ComplexMatrix full = spectral_projector(b, -100.0, 100.0);
  CHECK(max_abs_diff(full, ComplexMatrix::identity(3)) < 1e-12);
}

TEST_CASE("spectral projector idempotence on random input") {
  Rng rng(17);
  const ComplexMatrix m = random_hermitian(rng, 8, 2.0);
  const HermitianBlock b(m);
  const EigenSystem es = eigh(b);
  const double cut = 0.5 * (es.values[3] + es.values[4]);
  const ComplexMatrix p = spectral_projector(b, es.values.front() - 1.0, cut);
  CHECK(max_abs_diff(p * p, p) < 1e-10);
  CHECK(max_abs_diff(p.adjoint(), p) < 1e-10);
}

TEST_CASE("kernel_basis edge cases") {
  double gap = 0.0;
  const ComplexMatrix z(3, 3);
  const ComplexMatrix kz = kernel_basis(z, 1e-8, &gap);
  CHECK(kz.cols() == 3);

  const ComplexMatrix kid = kernel_basis(ComplexMatrix::identity(4), 1e-8, &gap);
  CHECK(kid.cols() == 0);

  // Rank-1 outer product u v*: null space is the orthogonal complement of v.
  Rng rng(3);
  ComplexMatrix u(4, 1), v(4, 1);
  for (int i = 0; i < 4; ++i) {
    u(i, 0) = rng.complex_normal();
    v(i, 0) = rng.complex_normal();
  }
  const ComplexMatrix outer = u * v.adjoint();
  const ComplexMatrix null_basis = kernel_basis(outer, 1e-8, &gap);
  REQUIRE(null_basis.cols() == 3);
  const ComplexMatrix overlap = v.adjoint() * null_basis;
  CHECK(overlap.max_abs() < 1e-10 * v.frobenius_norm());
  CHECK(gap > 1e3);
}

TEST_CASE("kernel_basis flags ill-separated rank decisions") {
  // Singular values 1 and 2e-8 with rank_tol 1e-8: ratio 1/2e-8 < 1e3 fails
  // the gap requirement.
  ComplexMatrix m(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = 2e-8;
  CHECK_THROWS_AS(kernel_basis(m, 1e-8), Error);
}

TEST_CASE("propagator: constant block reproduces the matrix exponential") {
  Rng rng(23);
  const ComplexMatrix m = random_hermitian(rng, 5, 8.0);  // |B| (t1-t0) <= 10
  const HermitianBlock b(m);
  auto family = [&](double) { return b; };
  const ComplexMatrix phi = propagate_unitary(family, 0.0, 1.0, 1000);
  const ComplexMatrix exact = hermitian_unitary_exp(eigh(b), 1.0);
  CHECK(max_abs_diff(phi, exact) < 1e-8);
  CHECK(max_abs_diff(phi.adjoint() * phi, ComplexMatrix::identity(5)) < 1e-12);
}

TEST_CASE("propagator: scalar family against the quadrature oracle") {
  // b(t) = 2 + sin(3t); its antiderivative 2t - cos(3t)/3 gives the phase.
  auto scalar = [](double t) {
    ComplexMatrix m(1, 1);
    m(0, 0) = 2.0 + std::sin(3.0 * t);
    return HermitianBlock(m);
  };
  auto antideriv = [](double t) { return 2.0 * t - std::cos(3.0 * t) / 3.0; };

  // Independent oracle: adaptive Simpson quadrature of b.
  struct Simpson {
    static double rule(double (*f)(double), double a, double b) {
      const double c = 0.5 * (a + b);
      return (b - a) / 6.0 * (f(a) + 4.0 * f(c) + f(b));
    }
    static double integrate(double (*f)(double), double a, double b, double eps) {
      const double whole = rule(f, a, b);
      return refine(f, a, b, eps, whole, 30);
    }
    static double refine(double (*f)(double), double a, double b, double eps, double whole,
                         int depth) {
      const double c = 0.5 * (a + b);
      const double left = rule(f, a, c), right = rule(f, c, b);
      if (depth <= 0 || std::abs(left + right - whole) < 15.0 * eps)
        return left + right + (left + right - whole) / 15.0;
      return refine(f, a, c, eps / 2, left, depth - 1) +
             refine(f, c, b, eps / 2, right, depth - 1);
    }
  };
  const double integral = Simpson::integrate([](double t) { return 2.0 + std::sin(3.0 * t); },
                                             0.0, 1.0, 1e-13);
  CHECK(std::abs(integral - (antideriv(1.0) - antideriv(0.0))) < 1e-11);

  const ComplexMatrix phi = propagate_unitary(scalar, 0.0, 1.0, 1 << 14);
  const cplx expected = std::polar(1.0, integral);
  CHECK(std::abs(phi(0, 0) - expected) < 1e-8);
}

TEST_CASE("propagator: enforced unitarity and second-order convergence") {
  Rng rng(31);
  const ComplexMatrix a0 = random_hermitian(rng, 4, 2.0);
  const ComplexMatrix a1 = random_hermitian(rng, 4, 2.0);
  auto family = [&](double t) {
    return HermitianBlock(a0.scaled(std::cos(2.0 * t)) + a1.scaled(std::sin(3.0 * t)), 1e-9);
  };
  const ComplexMatrix phi = propagate_unitary(family, 0.0, 1.0, 64);
  CHECK(max_abs_diff(phi.adjoint() * phi, ComplexMatrix::identity(4)) < 1e-12);

  const ComplexMatrix ref = propagate_unitary(family, 0.0, 1.0, 1 << 14);
  const double e1 = max_abs_diff(propagate_unitary(family, 0.0, 1.0, 64), ref);
  const double e2 = max_abs_diff(propagate_unitary(family, 0.0, 1.0, 128), ref);
  const double e3 = max_abs_diff(propagate_unitary(family, 0.0, 1.0, 256), ref);
  CHECK(e1 / e2 >= 3.0);
  CHECK(e2 / e3 >= 3.0);
}

TEST_CASE("default step rule") {
  CHECK(default_propagator_steps(0.1, 0.0, 1.0) == 64);
  CHECK(default_propagator_steps(5.0, 0.0, 1.0) == 160);
}
