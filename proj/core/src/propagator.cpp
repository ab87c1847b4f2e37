#include "specflow/propagator.hpp"

#include <cmath>

#include "specflow/eigh.hpp"

namespace specflow {

int default_propagator_steps(double b_norm_max, double t0, double t1) {
  const double span = std::abs(t1 - t0);
  const double guided = 32.0 * b_norm_max * span;
  int steps = 64;
  if (guided > 64.0) steps = static_cast<int>(std::ceil(guided));
  return steps;
}

ComplexMatrix polar_unitary(const ComplexMatrix& m) {
  // U = M (M*M)^{-1/2}.
  const HermitianBlock gram(m.adjoint() * m, 1e-8);
  const EigenSystem es = eigh(gram);
  for (double lam : es.values)
    if (lam <= 0.0) fail(ErrorKind::InvalidInput, "polar correction of a singular matrix");
  return m * hermitian_power(es, -0.5);
}

ComplexMatrix propagate_unitary(const BlockAtTime& family, double t0, double t1, int steps) {
  if (steps < 1) fail(ErrorKind::InvalidInput, "steps must be >= 1");
  const int n = family(t0).dim();
  ComplexMatrix phi = ComplexMatrix::identity(n);
  const double h = (t1 - t0) / steps;
  for (int k = 0; k < steps; ++k) {
    const double tm = t0 + (k + 0.5) * h;
    const HermitianBlock b = family(tm);
    if (b.dim() != n) fail(ErrorKind::InvalidInput, "family dimension changed along the path");
    phi = hermitian_unitary_exp(eigh(b), h) * phi;
  }
  return polar_unitary(phi);
}

ComplexMatrix propagate_real(const BlockAtTime& family, double t0, double t1, int steps,
                             double s_sign) {
  if (steps < 1) fail(ErrorKind::InvalidInput, "steps must be >= 1");
  const int n = family(t0).dim();
  ComplexMatrix psi = ComplexMatrix::identity(n);
  const double h = (t1 - t0) / steps;
  for (int k = 0; k < steps; ++k) {
    const double tm = t0 + (k + 0.5) * h;
    const HermitianBlock b = family(tm);
    if (b.dim() != n) fail(ErrorKind::InvalidInput, "family dimension changed along the path");
    psi = hermitian_real_exp(eigh(b), s_sign * h) * psi;
  }
  return psi;
}

}  // namespace specflow
