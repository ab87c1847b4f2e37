#pragma once

// Randomized property suites shared by the unit tests (small instance counts)
// and the acceptance runner (full counts). Each returns the number of
// failures; 0 means every seeded instance satisfied the identity.

#include <cmath>
#include <cstdint>

#include "specflow/eigh.hpp"
#include "specflow/generators.hpp"
#include "specflow/spectral_flow.hpp"

namespace suites {

using namespace specflow;

inline EquivariantInstance draw(Rng& rng, const EquivariantOptions& opts) {
  for (int k = 0; k < 64; ++k) {
    try {
      return random_equivariant_family(rng, opts);
    } catch (const Error&) {
      continue;  // redraw on rare cluster collisions
    }
  }
  throw Error(ErrorKind::InvalidInput, "instance drawing failed");
}

// Equivariant random Hermitian path vanishing at both endpoints, block
// aligned with the action's characters.
inline SampledFamily equivariant_bump(Rng& rng, const SymmetryAction& action,
                                      const std::vector<double>& times, double norm) {
  std::vector<ComplexMatrix> mods;
  for (const auto& c : action.characters)
    mods.push_back(random_hermitian(rng, c.multiplicity, norm));
  std::vector<HermitianBlock> blocks;
  for (double t : times) {
    ComplexMatrix m(action.dim, action.dim);
    const double env = std::sin(M_PI * t);
    for (size_t ci = 0; ci < action.characters.size(); ++ci) {
      const auto& c = action.characters[ci];
      m += (c.basis * (mods[ci].scaled(env) * c.basis.adjoint()));
    }
    blocks.emplace_back(std::move(m), 1e-9);
  }
  return SampledFamily(times, std::move(blocks), M_PI * norm);
}

inline bool close(cplx a, cplx b, double tol = 1e-9) { return std::abs(a - b) <= tol; }

// (1) Invertible families have zero flow.
inline int axiom_invertible(uint64_t seed, int n) {
  Rng rng(seed);
  EquivariantOptions opts;
  opts.invertible_path = true;
  int failures = 0;
  for (int i = 0; i < n; ++i) {
    const EquivariantInstance inst = draw(rng, opts);
    const FlowResult r =
        sfl_equivariant(inst.family, inst.action, build_flow_partition(inst.family));
    if (!close(r.value.value, 0.0)) ++failures;
    for (const auto& cf : r.per_character)
      if (cf.flow != 0) ++failures;
  }
  return failures;
}

// (2) Additivity over direct sums.
inline int axiom_direct_sum(uint64_t seed, int n) {
  Rng rng(seed);
  EquivariantOptions opts;
  opts.dim_max = 5;
  int failures = 0;
  for (int i = 0; i < n; ++i) {
    const EquivariantInstance a = draw(rng, opts);
    EquivariantInstance b = draw(rng, opts);
    SymmetryAction joint;
    for (int k = 0;; ++k) {
      try {
        joint = direct_sum(a.action, b.action);
        break;
      } catch (const Error&) {
        if (k > 32) throw;
        b = draw(rng, opts);
      }
    }
    const SampledFamily sum = direct_sum(a.family, b.family);
    const FlowResult ra = sfl_equivariant(a.family, a.action, build_flow_partition(a.family));
    const FlowResult rb = sfl_equivariant(b.family, b.action, build_flow_partition(b.family));
    const FlowResult rs = sfl_equivariant(sum, joint, build_flow_partition(sum));
    if (!close(rs.value.value, ra.value.value + rb.value.value)) ++failures;
  }
  return failures;
}

// (3) Homotopy invariance with fixed endpoints.
inline int axiom_homotopy(uint64_t seed, int n) {
  Rng rng(seed);
  int failures = 0;
  for (int i = 0; i < n; ++i) {
    const EquivariantInstance inst = draw(rng, {});
    const SampledFamily bump =
        equivariant_bump(rng, inst.action, inst.family.times, rng.uniform(0.5, 2.0));
    cplx reference;
    bool first = true;
    for (double s : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      std::vector<HermitianBlock> blocks;
      for (size_t k = 0; k < inst.family.times.size(); ++k)
        blocks.emplace_back(inst.family.blocks[k].matrix + bump.blocks[k].matrix.scaled(s),
                            1e-9);
      const SampledFamily fs(inst.family.times, std::move(blocks),
                             inst.family.lipschitz_bound + s * bump.lipschitz_bound + 1e-12);
      const FlowResult r = sfl_equivariant(fs, inst.action, build_flow_partition(fs));
      if (first) {
        reference = r.value.value;
        first = false;
      } else if (!close(r.value.value, reference)) {
        ++failures;
      }
    }
  }
  return failures;
}

// (4) Finite-dimensional endpoint formula.
inline int axiom_endpoint_formula(uint64_t seed, int n) {
  Rng rng(seed);
  int failures = 0;
  for (int i = 0; i < n; ++i) {
    const EquivariantInstance inst = draw(rng, {});
    const FlowResult r =
        sfl_equivariant(inst.family, inst.action, build_flow_partition(inst.family));
    const EquivariantValue t0 = negative_subspace_trace(inst.family, inst.action, 0.0);
    const EquivariantValue t1 = negative_subspace_trace(inst.family, inst.action, 1.0);
    if (!close(r.value.value, t0.value - t1.value)) ++failures;
  }
  return failures;
}

// (5) Concatenation additivity.
inline int axiom_concat(uint64_t seed, int n) {
  Rng rng(seed);
  int failures = 0;
  for (int i = 0; i < n; ++i) {
    const EquivariantInstance inst = draw(rng, {});
    // Second leg starts at A(1): A(1) + t * equivariant drift, redrawn until
    // the far endpoint is invertible.
    SampledFamily second = inst.family;  // placeholder
    for (int k = 0;; ++k) {
      const SampledFamily bump =
          equivariant_bump(rng, inst.action, inst.family.times, rng.uniform(0.5, 1.5));
      std::vector<HermitianBlock> blocks;
      for (size_t j = 0; j < inst.family.times.size(); ++j) {
        const double t = inst.family.times[j];
        blocks.emplace_back(
            inst.family.blocks.back().matrix.scaled(1.0 - 0.4 * t) + bump.blocks[j].matrix,
            1e-9);
      }
      SampledFamily cand(inst.family.times, std::move(blocks),
                         0.4 * 6.0 + bump.lipschitz_bound + 1.0);
      double min_end = 1e9;
      for (double lam : eigh(cand.blocks.back()).values)
        min_end = std::min(min_end, std::abs(lam));
      if (min_end > 0.05) {
        second = std::move(cand);
        break;
      }
      if (k > 32) throw Error(ErrorKind::InvalidInput, "concat leg drawing failed");
    }
    const SampledFamily joined = concat(inst.family, second);
    const FlowResult ra =
        sfl_equivariant(inst.family, inst.action, build_flow_partition(inst.family));
    const FlowResult rb = sfl_equivariant(second, inst.action, build_flow_partition(second));
    const FlowResult rj = sfl_equivariant(joined, inst.action, build_flow_partition(joined));
    if (!close(rj.value.value, ra.value.value + rb.value.value)) ++failures;
  }
  return failures;
}

// Two independently generated admissible partitions give identical flows.
inline int partition_independence(uint64_t seed, int n) {
  Rng rng(seed);
  int failures = 0;
  for (int i = 0; i < n; ++i) {
    const EquivariantInstance inst = draw(rng, {});
    PartitionOptions alt;
    alt.alternative_windows = true;
    const FlowResult r1 =
        sfl_equivariant(inst.family, inst.action, build_flow_partition(inst.family));
    const FlowResult r2 =
        sfl_equivariant(inst.family, inst.action, build_flow_partition(inst.family, alt));
    if (r1.per_character.size() != r2.per_character.size()) {
      ++failures;
      continue;
    }
    for (size_t k = 0; k < r1.per_character.size(); ++k) {
      if (r1.per_character[k].flow != r2.per_character[k].flow ||
          !close(r1.per_character[k].character, r2.per_character[k].character, 1e-12))
        ++failures;
    }
  }
  return failures;
}

}  // namespace suites
