#pragma once

#include <optional>
#include <string>
#include <vector>

#include "specflow/complex_matrix.hpp"

namespace specflow {

// A complex number attached to a group element; carries the exact integer
// specialization when the element is the identity.
struct EquivariantValue {
  cplx value{0.0, 0.0};
  std::string gamma_id;
  std::optional<long long> exact_integer;
};

// One eigenvalue of the unitary symmetry together with its eigenspace.
struct Character {
  cplx value;            // on the unit circle
  ComplexMatrix basis;   // dim x multiplicity, orthonormal columns
  int multiplicity;
  ComplexMatrix projector() const { return basis * basis.adjoint(); }
};

inline constexpr double kCharClusterTol = 1e-8;
inline constexpr double kCommuteTol = 1e-10;
inline constexpr double kInvarianceTol = 1e-8;

// A unitary symmetry decomposed into eigenvalue/eigenprojector pairs.
// Immutable after construction; characters ordered by angle in (-pi, pi].
struct SymmetryAction {
  std::string label;
  int dim = 0;
  ComplexMatrix unitary;
  std::vector<Character> characters;

  bool is_identity() const;
  static SymmetryAction identity(int dim, const std::string& label = "id");
};

// Eigendecomposition of a unitary with clustering on the unit circle.
// Pairs that are numerically distinct yet closer than cluster_tol are
// rejected (ClusterAmbiguity) rather than silently merged.
SymmetryAction decompose(const ComplexMatrix& unitary, const std::string& label = "gamma",
                         double cluster_tol = kCharClusterTol);

bool check_commutes(const SymmetryAction& action, const HermitianBlock& block,
                    double commute_tol = kCommuteTol);

// Compression W* M W onto the eigenspace of the given character value.
HermitianBlock restrict_block(const SymmetryAction& action, const HermitianBlock& block,
                              cplx character);

// tr(gamma | X) for the subspace spanned by the orthonormal columns of
// subspace_basis. Computed directly as tr(B* U B) and cross-checked against
// the character sum over dim(E_lambda ^ X); the two must agree to 1e-8.
EquivariantValue equivariant_trace(const SymmetryAction& action,
                                   const ComplexMatrix& subspace_basis,
                                   double inv_tol = kInvarianceTol);

}  // namespace specflow
