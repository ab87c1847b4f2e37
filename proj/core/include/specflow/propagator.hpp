#pragma once

#include <functional>

#include "specflow/complex_matrix.hpp"

namespace specflow {

using BlockAtTime = std::function<HermitianBlock(double)>;

// Default step count for the midpoint scheme: max(64, ceil(32 |B|max dt)).
int default_propagator_steps(double b_norm_max, double t0, double t1);

// Time-ordered solution of Phi' = i B(t) Phi, Phi(t0) = I, by the midpoint
// exponential (Magnus-1) scheme; each factor is an exact Hermitian
// exponential, with a polar correction at the end against roundoff drift.
// Second-order accurate in the step size; unitary to ~1e-14.
ComplexMatrix propagate_unitary(const BlockAtTime& family, double t0, double t1, int steps);

// Solution of Psi' = s_sign * B(t) Psi (real exponential character;
// invertible, not unitary). Used for the Riemannian boundary map with
// s_sign = -1 for d/dt f = -B f and +1 for the adjoint flow.
ComplexMatrix propagate_real(const BlockAtTime& family, double t0, double t1, int steps,
                             double s_sign);

// Polar factor U of M = U P (P positive); requires M invertible.
ComplexMatrix polar_unitary(const ComplexMatrix& m);

}  // namespace specflow
