#pragma once

#include <string>
#include <vector>

#include "specflow/symmetry.hpp"

namespace specflow {

// One isolated eigenvalue with its gamma-trace data. value == 0 entries are
// kernel data: they never enter a signed eta sum.
struct FinitePart {
  double value = 0.0;
  int multiplicity = 1;
  cplx character{1.0, 0.0};  // per unit of multiplicity
};

// Two-sided arithmetic progression step*(j + offset), j in Z, offset in
// (0,1]. Characters advance geometrically with j: the element at j >= 0
// carries w_pos * ratio^j, the element at j <= -1 carries w_neg *
// ratio^(j+1); |ratio| = 1 and the weights carry any multiplicity. For
// offset == 1 the j = -1 element sits at zero and is skipped (builders
// record such kernels as finite parts).
struct Progression {
  double offset = 1.0;
  double step = 1.0;
  cplx w_pos{1.0, 0.0};
  cplx w_neg{1.0, 0.0};
  cplx ratio{1.0, 0.0};
};

struct CharacterSpectrum {
  std::vector<FinitePart> finite;
  std::vector<Progression> progressions;
  std::string gamma_id = "id";

  void validate() const;
  cplx kernel_trace() const;  // sum over finite entries at exactly 0
};

// Analytic continuation at s = 0 via the Hurwitz identity zeta(0, a) = 1/2-a.
// Supports ratio == 1 progressions (any weights) plus arbitrary finite
// parts; ratio != 1 raises UseNumericOracle.
EquivariantValue eta_closed_form(const CharacterSpectrum& spectrum);

struct AbelOptions {
  int k_min = 4;
  int k_max = 12;
  double x_scale = 1.0;       // r_k = 1 - x_scale * 2^-k
  double tail_tol = 1e-10;
  double residual_tol = 1e-5;
  bool reverse_order = false;  // sum each truncated series from the far end
};

struct AbelEvaluation {
  EquivariantValue value;
  double residual = 0.0;
};

// Independent regularization: sum sign(v) chi_v r^{|v|} truncated with a
// certified tail bound, Richardson-extrapolated along r -> 1. Divergent
// inputs (unbounded character partial sums) surface as NoConvergence.
AbelEvaluation eta_abel_oracle(const CharacterSpectrum& spectrum, const AbelOptions& opts = {});

struct BoundaryTerm {
  EquivariantValue b_value;
  cplx ker0{0, 0}, ker1{0, 0};
  cplx eta0{0, 0}, eta1{0, 0};
  std::string eta_method;  // "closed" or "abel"
};

// b = -1/2 ( tr(gamma|ker A(0)) + tr(gamma|ker A(1)) + eta(A(0)) - eta(A(1)) ).
BoundaryTerm boundary_term(const CharacterSpectrum& a0, const CharacterSpectrum& a1);

}  // namespace specflow
