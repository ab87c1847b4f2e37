#include "specflow/aps_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "specflow/eigh.hpp"
#include "specflow/propagator.hpp"
#include "specflow/svd.hpp"

namespace specflow {

const char* variant_name(Variant v) {
  return v == Variant::Lorentzian ? "lorentzian" : "riemannian";
}

const char* convention_name(EndpointConvention c) {
  return c == EndpointConvention::Strict ? "strict" : "inclusive";
}

namespace {

constexpr double kEndpointGuard = 1e-8;
constexpr double kSigmaStabilTol = 1e-8;

void guard_endpoint_spectrum(const std::vector<double>& vals) {
  double scale = 1.0;
  for (double v : vals) scale = std::max(scale, std::abs(v));
  for (double v : vals)
    if (std::abs(v) < kEndpointGuard * scale)
      fail(ErrorKind::DegenerateEndpoint,
           "endpoint operator has an eigenvalue within rank tolerance of 0; "
           "exact kernels require the closed-form curve representation");
}

struct BoundaryData {
  ComplexMatrix in_neg;     // basis of E_(-inf,0)(B(0))
  ComplexMatrix in_nonneg;  // basis of E_[0,inf)(B(0))
  ComplexMatrix out_ker;    // basis of the subspace rejected at T for kernel flows
  ComplexMatrix out_cok;    // same for adjoint flows
};

BoundaryData boundary_bases(const EigenSystem& es0, const EigenSystem& esT,
                            EndpointConvention conv) {
  BoundaryData d;
  std::vector<int> neg0, nonneg0, ker_rej, cok_rej;
  for (int i = 0; i < static_cast<int>(es0.values.size()); ++i)
    (es0.values[i] < 0.0 ? neg0 : nonneg0).push_back(i);
  for (int i = 0; i < static_cast<int>(esT.values.size()); ++i) {
    // Kernel flows must land in the admitted terminal subspace: strict
    // E_(0,inf), inclusive E_[0,inf); the rejected complement is tested.
    if (conv == EndpointConvention::Strict ? esT.values[i] <= 0.0 : esT.values[i] < 0.0)
      ker_rej.push_back(i);
    // Adjoint flows must land in E_(-inf,0] (strict) or E_(-inf,0) (incl.).
    if (conv == EndpointConvention::Strict ? esT.values[i] > 0.0 : esT.values[i] >= 0.0)
      cok_rej.push_back(i);
  }
  d.in_neg = es0.vectors.columns(neg0);
  d.in_nonneg = es0.vectors.columns(nonneg0);
  d.out_ker = esT.vectors.columns(ker_rej);
  d.out_cok = esT.vectors.columns(cok_rej);
  return d;
}

// Midpoint-exponential propagator refined by one Richardson step; the
// one-step map is time-symmetric, so the extrapolation is 4th order. Rank
// decisions on the boundary maps need tighter accuracy than the raw
// second-order scheme delivers at sane step counts.
ComplexMatrix refined_propagator(const BlockAtTime& family, int steps, bool unitary,
                                 double s_sign) {
  const ComplexMatrix coarse = unitary ? propagate_unitary(family, 0.0, 1.0, steps)
                                       : propagate_real(family, 0.0, 1.0, steps, s_sign);
  const ComplexMatrix fine = unitary ? propagate_unitary(family, 0.0, 1.0, 2 * steps)
                                     : propagate_real(family, 0.0, 1.0, 2 * steps, s_sign);
  ComplexMatrix mix = fine.scaled(4.0 / 3.0) - coarse.scaled(1.0 / 3.0);
  return unitary ? polar_unitary(mix) : mix;
}

double sigma_change(const std::vector<double>& a, const std::vector<double>& b) {
  double scale = 1.0, change = 0.0;
  for (double s : a) scale = std::max(scale, s);
  for (size_t i = 0; i < a.size() && i < b.size(); ++i)
    change = std::max(change, std::abs(a[i] - b[i]));
  return change / scale;
}

IndexResult solve_sampled(const SampledFamily& f, double horizon, Variant variant,
                          EndpointConvention conv, const SymmetryAction& action) {
  if (action.dim != f.dim()) fail(ErrorKind::InvalidInput, "action dimension mismatch");
  for (const auto& b : f.blocks)
    if (!check_commutes(action, b))
      fail(ErrorKind::NotEquivariant, "family does not commute with the symmetry");

  const EigenSystem es0 = eigh(f.blocks.front());
  const EigenSystem esT = eigh(f.blocks.back());
  guard_endpoint_spectrum(es0.values);
  guard_endpoint_spectrum(esT.values);
  const BoundaryData bd = boundary_bases(es0, esT, conv);

  // Physical time [0, horizon] pulled back to the family parameter.
  auto scaled = [&](double u) { return HermitianBlock(f.at(u).matrix.scaled(horizon), 1e-9); };

  double b_norm = 0.0;
  for (const auto& b : f.blocks) b_norm = std::max(b_norm, b.matrix.inf_norm());
  int steps = std::max(default_propagator_steps(b_norm * horizon, 0.0, 1.0), 256);

  const bool unitary = variant == Variant::Lorentzian;
  IndexResult out;
  out.variant = variant;
  out.convention = conv;

  ComplexMatrix ker_map, cok_map;
  std::vector<double> sig_ker, sig_cok;
  bool stabilized = false;
  for (int level = 0; level < 8; ++level) {
    const ComplexMatrix flow = refined_propagator(scaled, steps, unitary, -1.0);
    // Adjoint flows solve the same equation in the Lorentzian case; the
    // Riemannian adjoint runs the opposite exponential character.
    const ComplexMatrix adj_flow =
        unitary ? flow : refined_propagator(scaled, steps, false, +1.0);

    ComplexMatrix kmap = bd.out_ker.adjoint() * (flow * bd.in_neg);
    ComplexMatrix cmap = bd.out_cok.adjoint() * (adj_flow * bd.in_nonneg);
    std::vector<double> sk = singular_values(kmap).values;
    std::vector<double> sc = singular_values(cmap).values;
    const bool settled = level > 0 && sigma_change(sig_ker, sk) <= kSigmaStabilTol &&
                         sigma_change(sig_cok, sc) <= kSigmaStabilTol;
    sig_ker = std::move(sk);
    sig_cok = std::move(sc);
    ker_map = std::move(kmap);
    cok_map = std::move(cmap);
    out.propagator_steps = 2 * steps;
    if (settled) {
      stabilized = true;
      break;
    }
    steps *= 2;
  }
  if (!stabilized)
    fail(ErrorKind::NoConvergence, "boundary-map singular values did not stabilize");

  double gap_k = std::numeric_limits<double>::infinity();
  double gap_c = std::numeric_limits<double>::infinity();
  const ComplexMatrix ker_null = kernel_basis(ker_map, kRankTol, &gap_k);
  const ComplexMatrix cok_null = kernel_basis(cok_map, kRankTol, &gap_c);
  out.boundary_map_rank_gap = std::min(gap_k, gap_c);

  const ComplexMatrix kernel = bd.in_neg * ker_null;
  const ComplexMatrix cokernel = bd.in_nonneg * cok_null;
  out.kernel_trace = equivariant_trace(action, kernel);
  out.cokernel_trace = equivariant_trace(action, cokernel);
  out.index.gamma_id = action.label;
  out.index.value = out.kernel_trace.value - out.cokernel_trace.value;
  if (action.is_identity())
    out.index.exact_integer = static_cast<long long>(kernel.cols()) - cokernel.cols();
  return out;
}

// Exact per-channel path. A closed-form curve channel with endpoint values
// (a, b) joins the kernel iff a < 0 and b is admitted at T, and the cokernel
// iff a >= 0 and b is rejected by the adjoint condition; the scalar
// propagator is nonzero and never changes membership.
struct ChannelTally {
  cplx kernel = 0.0, cokernel = 0.0;
  long long kernel_dim = 0, cokernel_dim = 0;
  std::vector<CharacterIndex> per_character;
};

ChannelTally tally_curves(const CurveFamily& curves, int base_weight, EndpointConvention conv,
                          const GroupAngle& gamma) {
  ChannelTally tally;
  for (const auto& entry : curves.curves) {
    const double a = entry.curve.eval(0.0);
    const double b = entry.curve.eval(1.0);
    const bool admitted_at_T = conv == EndpointConvention::Strict ? b > 0.0 : b >= 0.0;
    const bool rejected_adjoint = conv == EndpointConvention::Strict ? b <= 0.0 : b < 0.0;
    long long sign = 0;
    if (a < 0.0 && admitted_at_T) sign = 1;
    if (a >= 0.0 && rejected_adjoint) sign = -1;
    if (sign == 0) continue;
    for (const auto& wc : entry.weights) {
      const cplx ch = gamma.character(wc.weight + base_weight);
      if (sign == 1) {
        tally.kernel += static_cast<double>(wc.count) * ch;
        tally.kernel_dim += wc.count;
      } else {
        tally.cokernel += static_cast<double>(wc.count) * ch;
        tally.cokernel_dim += wc.count;
      }
      tally.per_character.push_back({ch, sign * wc.count});
    }
  }
  return tally;
}

std::vector<CharacterIndex> group_character_indices(std::vector<CharacterIndex> raw) {
  std::stable_sort(raw.begin(), raw.end(),
                   [](const CharacterIndex& x, const CharacterIndex& y) {
                     const double ax = std::arg(x.character), ay = std::arg(y.character);
                     if (ax != ay) return ax < ay;
                     return x.character.real() < y.character.real();
                   });
  std::vector<CharacterIndex> out;
  for (const auto& ci : raw) {
    if (!out.empty() && std::abs(out.back().character - ci.character) <= 1e-9)
      out.back().index += ci.index;
    else
      out.push_back(ci);
  }
  return out;
}

}  // namespace

IndexResult solve_index(const ApsProblem& problem, const SymmetryAction& action) {
  if (std::holds_alternative<SampledFamily>(problem.family))
    return solve_sampled(std::get<SampledFamily>(problem.family), problem.horizon,
                         problem.variant, problem.convention, action);
  fail(ErrorKind::InvalidInput,
       "matrix-action index path expects a sampled family; use a GroupAngle for mode families");
}

IndexResult solve_index(const ApsProblem& problem, const GroupAngle& gamma) {
  if (!std::holds_alternative<ModeBlockFamily>(problem.family))
    fail(ErrorKind::InvalidInput, "weight-labelled index path expects a mode-block family");
  const ModeBlockFamily& fam = std::get<ModeBlockFamily>(problem.family);
  fam.validate();

  IndexResult out;
  out.variant = problem.variant;
  out.convention = problem.convention;
  out.boundary_map_rank_gap = std::numeric_limits<double>::infinity();
  out.index.gamma_id = gamma.id;
  out.kernel_trace.gamma_id = gamma.id;
  out.cokernel_trace.gamma_id = gamma.id;

  long long kdim = 0, cdim = 0;
  for (const auto& mode : fam.modes) {
    if (mode.curves) {
      const ChannelTally tally =
          tally_curves(*mode.curves, mode.base_weight, problem.convention, gamma);
      out.kernel_trace.value += tally.kernel;
      out.cokernel_trace.value += tally.cokernel;
      kdim += tally.kernel_dim;
      cdim += tally.cokernel_dim;
    } else {
      std::vector<cplx> d;
      for (int w : mode.fiber_weights) d.push_back(gamma.character(w + mode.base_weight));
      const SymmetryAction action = decompose(ComplexMatrix::diag(d), gamma.id);
      ApsProblem sub;
      sub.family = *mode.sampled;
      sub.horizon = problem.horizon;
      sub.variant = problem.variant;
      sub.convention = problem.convention;
      const IndexResult r = solve_index(sub, action);
      out.kernel_trace.value += r.kernel_trace.value;
      out.cokernel_trace.value += r.cokernel_trace.value;
      out.boundary_map_rank_gap = std::min(out.boundary_map_rank_gap, r.boundary_map_rank_gap);
      out.propagator_steps = std::max(out.propagator_steps, r.propagator_steps);
      if (gamma.is_identity()) {
        kdim += std::llround(r.kernel_trace.value.real());
        cdim += std::llround(r.cokernel_trace.value.real());
      }
    }
  }
  out.index.value = out.kernel_trace.value - out.cokernel_trace.value;
  if (gamma.is_identity()) {
    out.index.exact_integer = kdim - cdim;
    out.kernel_trace.exact_integer = kdim;
    out.cokernel_trace.exact_integer = cdim;
  }
  return out;
}

DecompositionReport index_decomposition_check(const ApsProblem& problem,
                                              const SymmetryAction& action) {
  DecompositionReport report;
  report.direct = solve_index(problem, action);

  const SampledFamily& f = std::get<SampledFamily>(problem.family);
  std::vector<CharacterIndex> per_char;
  for (const auto& c : action.characters) {
    std::vector<HermitianBlock> blocks;
    blocks.reserve(f.blocks.size());
    for (const auto& b : f.blocks)
      blocks.emplace_back(c.basis.adjoint() * (b.matrix * c.basis), 1e-9);
    ApsProblem sub;
    sub.family = SampledFamily(f.times, std::move(blocks), f.lipschitz_bound);
    sub.horizon = problem.horizon;
    sub.variant = problem.variant;
    sub.convention = problem.convention;
    const IndexResult r = solve_index(sub, SymmetryAction::identity(c.multiplicity));
    per_char.push_back({c.value, *r.index.exact_integer});
  }
  report.per_character = group_character_indices(std::move(per_char));
  report.decomposed = 0.0;
  for (const auto& ci : report.per_character)
    report.decomposed += ci.character * static_cast<double>(ci.index);
  if (std::abs(report.decomposed - report.direct.index.value) > 1e-9)
    fail(ErrorKind::InternalInconsistency,
         "direct equivariant index disagrees with the character decomposition");
  return report;
}

DecompositionReport index_decomposition_check(const ApsProblem& problem,
                                              const GroupAngle& gamma) {
  DecompositionReport report;
  report.direct = solve_index(problem, gamma);

  const ModeBlockFamily& fam = std::get<ModeBlockFamily>(problem.family);
  std::vector<CharacterIndex> per_char;
  for (const auto& mode : fam.modes) {
    if (mode.curves) {
      const ChannelTally tally =
          tally_curves(*mode.curves, mode.base_weight, problem.convention, gamma);
      for (const auto& ci : tally.per_character) per_char.push_back(ci);
    } else {
      std::vector<cplx> d;
      for (int w : mode.fiber_weights) d.push_back(gamma.character(w + mode.base_weight));
      const SymmetryAction action = decompose(ComplexMatrix::diag(d), gamma.id);
      ApsProblem sub;
      sub.family = *mode.sampled;
      sub.horizon = problem.horizon;
      sub.variant = problem.variant;
      sub.convention = problem.convention;
      const DecompositionReport r = index_decomposition_check(sub, action);
      for (const auto& ci : r.per_character) per_char.push_back(ci);
    }
  }
  report.per_character = group_character_indices(std::move(per_char));
  report.decomposed = 0.0;
  for (const auto& ci : report.per_character)
    report.decomposed += ci.character * static_cast<double>(ci.index);
  if (std::abs(report.decomposed - report.direct.index.value) > 1e-9)
    fail(ErrorKind::InternalInconsistency,
         "direct equivariant index disagrees with the character decomposition");
  return report;
}

DeformationReport deformation_invariance_check(const std::vector<ApsProblem>& stages,
                                               const SymmetryAction& action) {
  if (stages.size() < 2) fail(ErrorKind::InvalidInput, "deformation needs at least two stages");
  const SampledFamily& first = std::get<SampledFamily>(stages.front().family);
  for (const auto& st : stages) {
    const SampledFamily& f = std::get<SampledFamily>(st.family);
    if (max_abs_diff(f.blocks.front().matrix, first.blocks.front().matrix) > 1e-10 ||
        max_abs_diff(f.blocks.back().matrix, first.blocks.back().matrix) > 1e-10)
      fail(ErrorKind::InvalidInput, "deformation endpoints are not fixed");
  }
  DeformationReport report;
  for (const auto& st : stages) report.stages.push_back(solve_index(st, action));
  for (const auto& r : report.stages)
    report.max_deviation = std::max(report.max_deviation,
                                    std::abs(r.index.value - report.stages.front().index.value));
  report.constant = report.max_deviation <= 1e-9;
  return report;
}

}  // namespace specflow
