#pragma once

#include "specflow/partition.hpp"
#include "specflow/symmetry.hpp"

namespace specflow {

// sfl(A) = sum_k dim E_[0,a_k](A(t_k)) - dim E_[0,a_k](A(t_{k-1})).
// Closed-window convention: an eigenvalue exactly at 0 counts as inside
// (possible only for closed-form curves; sampled families with eigenvalues
// within rank tolerance of 0 at t in {0,1} raise DegenerateEndpoint).
long long sfl(const SampledFamily& f, const FlowPartition& p);
long long sfl(const CurveFamily& f, const FlowPartition& p);
long long sfl(const ModeBlockFamily& f, const FlowPartition& p);

struct CharacterFlow {
  cplx character;
  long long flow;
};

struct FlowResult {
  EquivariantValue value;                   // sfl_gamma, computed two ways
  FlowPartition partition;
  std::vector<CharacterFlow> per_character; // integer sfl of each restriction
};

// sfl_gamma computed (a) directly via window traces of gamma and (b) via the
// eigenspace decomposition sum_lambda lambda sfl(A|E_lambda); the two routes
// must agree to 1e-9 or InternalInconsistency is raised.
FlowResult sfl_equivariant(const SampledFamily& f, const SymmetryAction& action,
                           const FlowPartition& p);
FlowResult sfl_equivariant(const CurveFamily& f, const GroupAngle& gamma,
                           const FlowPartition& p);
FlowResult sfl_equivariant(const ModeBlockFamily& f, const GroupAngle& gamma,
                           const FlowPartition& p);

// tr(gamma | E_(-inf,0)(A(t))) at an endpoint; strict negativity. Sampled
// eigenvalues within rank tolerance of 0 raise DegenerateEndpoint.
EquivariantValue negative_subspace_trace(const SampledFamily& f, const SymmetryAction& action,
                                         double t);

// Path operations ------------------------------------------------------------

SampledFamily reverse(const SampledFamily& f);
CurveFamily reverse(const CurveFamily& f);

// Concatenation in family time: a on [0,1/2], b on [1/2,1]; endpoints must
// match (||a(1) - b(0)||_max <= 1e-10, per-curve for the closed-form case).
SampledFamily concat(const SampledFamily& a, const SampledFamily& b);
CurveFamily concat(const CurveFamily& a, const CurveFamily& b);

SampledFamily direct_sum(const SampledFamily& a, const SampledFamily& b);
CurveFamily direct_sum(const CurveFamily& a, const CurveFamily& b);
SymmetryAction direct_sum(const SymmetryAction& a, const SymmetryAction& b);

// N(t)^{s/2} A(t) N(t)^{s/2} with N Hermitian positive, N(0) = N(1) = I.
SampledFamily congruence_homotopy(const SampledFamily& f, const SampledFamily& weights,
                                  double s);

}  // namespace specflow
