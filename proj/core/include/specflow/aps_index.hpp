#pragma once

#include "specflow/family.hpp"
#include "specflow/symmetry.hpp"

namespace specflow {

enum class Variant { Lorentzian, Riemannian };
enum class EndpointConvention { Strict, Inclusive };

const char* variant_name(Variant v);
const char* convention_name(EndpointConvention c);

// The model operator d/dt - i B(t) (Lorentzian) or d/dt + B(t) (Riemannian)
// on [0, horizon] with APS boundary conditions: f(0) in E_(-inf,0)(B(0)) and
// f(T) in E_(0,inf)(B(T)) (strict) or E_[0,inf)(B(T)) (inclusive). The family
// parameter is always [0,1]; horizon rescales physical time.
struct ApsProblem {
  FamilyRep family;
  double horizon = 1.0;
  Variant variant = Variant::Lorentzian;
  EndpointConvention convention = EndpointConvention::Strict;
};

struct IndexResult {
  EquivariantValue index;
  EquivariantValue kernel_trace;
  EquivariantValue cokernel_trace;
  // Smallest rank-decision separation across the two boundary maps; +inf on
  // the exact closed-form path.
  double boundary_map_rank_gap = 0.0;
  Variant variant = Variant::Lorentzian;
  EndpointConvention convention = EndpointConvention::Strict;
  int propagator_steps = 0;  // 0 on the exact path
};

// Kernel and cokernel via the propagator boundary map; equivariant traces of
// gamma on both. Matrix path for sampled families (with a SymmetryAction),
// exact per-channel path for mode families with closed-form curves (with a
// GroupAngle).
IndexResult solve_index(const ApsProblem& problem, const SymmetryAction& action);
IndexResult solve_index(const ApsProblem& problem, const GroupAngle& gamma);

struct CharacterIndex {
  cplx character;
  long long index;
};

struct DecompositionReport {
  IndexResult direct;
  std::vector<CharacterIndex> per_character;
  cplx decomposed;  // sum over characters of lambda * ind_lambda
};

// ind_gamma directly and as the character-weighted sum of restricted plain
// indices; agreement within 1e-9 is asserted (InternalInconsistency).
DecompositionReport index_decomposition_check(const ApsProblem& problem,
                                              const SymmetryAction& action);
DecompositionReport index_decomposition_check(const ApsProblem& problem,
                                              const GroupAngle& gamma);

struct DeformationReport {
  std::vector<IndexResult> stages;
  bool constant = false;
  double max_deviation = 0.0;
};

// Recomputes the index along a deformation path with fixed endpoint blocks;
// all stages must agree within 1e-9.
DeformationReport deformation_invariance_check(const std::vector<ApsProblem>& stages,
                                               const SymmetryAction& action);

}  // namespace specflow
