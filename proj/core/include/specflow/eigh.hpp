#pragma once

#include <vector>

#include "specflow/complex_matrix.hpp"

namespace specflow {

// Full orthonormal eigendecomposition of a Hermitian block; values ascending,
// vectors(:,i) the eigenvector of values[i].
struct EigenSystem {
  std::vector<double> values;
  ComplexMatrix vectors;
};

inline constexpr double kEigTol = 1e-12;

// Cyclic complex Jacobi. Deterministic: identical input bits give identical
// output bits (fixed sweep order, fixed sort, fixed phase convention).
EigenSystem eigh(const HermitianBlock& block);

// Reconstruction V diag(values) V*.
ComplexMatrix eigen_reconstruct(const EigenSystem& es);

// Orthogonal projector onto the span of eigenvectors with eigenvalue in
// [lo, hi]. Interval endpoints must stay clear of the spectrum by
// eig_collision_tol * max(1, |spectrum|); otherwise SpectralBoundaryCollision.
ComplexMatrix spectral_projector(const HermitianBlock& block, double lo, double hi,
                                 double eig_collision_tol = kEigTol);

// Columns spanning eigenvalues in [lo, hi] (same collision rule).
ComplexMatrix spectral_subspace_basis(const HermitianBlock& block, double lo, double hi,
                                      double eig_collision_tol = kEigTol);

// f(M) = V f(diag) V* for a real function applied to the spectrum.
ComplexMatrix hermitian_function(const EigenSystem& es, double (*f)(double));

// V diag(exp(i s values)) V*, the unitary exp(i s M).
ComplexMatrix hermitian_unitary_exp(const EigenSystem& es, double s);
// V diag(exp(s values)) V*.
ComplexMatrix hermitian_real_exp(const EigenSystem& es, double s);
// V diag(values^p) V*; requires positive spectrum.
ComplexMatrix hermitian_power(const EigenSystem& es, double p);

}  // namespace specflow
