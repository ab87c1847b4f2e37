#pragma once

#include <cstdint>

#include "specflow/family.hpp"
#include "specflow/symmetry.hpp"

namespace specflow {

// splitmix64-based generator: identical streams on every platform, so seeded
// scenarios reproduce byte-for-byte.
class Rng {
public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64();
  double uniform();  // [0, 1)
  double uniform(double lo, double hi);
  int uniform_int(int lo, int hi);  // inclusive
  double normal();
  cplx complex_normal();

private:
  uint64_t state_;
};

ComplexMatrix random_hermitian(Rng& rng, int dim, double norm_bound);
// QR of a Gaussian matrix with the R-diagonal phases absorbed.
ComplexMatrix haar_unitary(Rng& rng, int dim);

struct EquivariantInstance {
  SampledFamily family;
  SymmetryAction action;
};

struct EquivariantOptions {
  int dim_min = 2;
  int dim_max = 8;
  double norm_bound = 5.0;
  int samples = 9;
  // Minimum |eigenvalue| at t in {0,1} relative to the norm bound; instances
  // violating it are redrawn.
  double endpoint_gap = 0.04;
  bool invertible_path = false;  // keep the whole path invertible
};

// Block-diagonal over randomly chosen characters, then conjugated by a Haar
// unitary; the smooth path A0 + t A1 + sin(pi t) A2 is sampled on a uniform
// grid with its analytic Lipschitz bound attached.
EquivariantInstance random_equivariant_family(Rng& rng, const EquivariantOptions& opts = {});

// Positive-weight path N(t) with N(0) = N(1) = I for congruence homotopies.
SampledFamily random_congruence_weights(Rng& rng, int dim, int samples = 9);

}  // namespace specflow
