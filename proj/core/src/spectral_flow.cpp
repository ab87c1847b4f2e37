#include "specflow/spectral_flow.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "specflow/eigh.hpp"

namespace specflow {

namespace {

constexpr double kEndpointGuard = 1e-8;
constexpr double kRouteTol = 1e-9;

void guard_endpoint(const std::vector<double>& vals) {
  double scale = 1.0;
  for (double v : vals) scale = std::max(scale, std::abs(v));
  for (double v : vals) {
    if (std::abs(v) < kEndpointGuard * scale)
      fail(ErrorKind::DegenerateEndpoint,
           "sampled family has an eigenvalue within rank tolerance of 0 at an endpoint");
  }
}

long long count_in_window(const std::vector<SpectrumPoint>& spec, double a) {
  long long n = 0;
  for (const auto& pt : spec)
    if (pt.value >= 0.0 && pt.value <= a) n += pt.multiplicity;
  return n;
}

cplx weights_trace_in_window(const std::vector<SpectrumPoint>& spec, double a,
                             const GroupAngle& gamma) {
  cplx t = 0.0;
  for (const auto& pt : spec)
    if (pt.value >= 0.0 && pt.value <= a) t += character_trace(pt.weights, gamma);
  return t;
}

// Merge (character, flow) contributions whose characters coincide.
std::vector<CharacterFlow> group_flows(std::vector<CharacterFlow> raw) {
  std::stable_sort(raw.begin(), raw.end(), [](const CharacterFlow& x, const CharacterFlow& y) {
    const double ax = std::arg(x.character), ay = std::arg(y.character);
    if (ax != ay) return ax < ay;
    return x.character.real() < y.character.real();
  });
  std::vector<CharacterFlow> out;
  for (const auto& cf : raw) {
    if (!out.empty() && std::abs(out.back().character - cf.character) <= 1e-9) {
      out.back().flow += cf.flow;
    } else {
      out.push_back(cf);
    }
  }
  return out;
}

FlowResult assemble_result(cplx direct, std::vector<CharacterFlow> per_char, bool identity,
                           const std::string& gamma_id, const FlowPartition& p) {
  per_char = group_flows(std::move(per_char));
  cplx deco = 0.0;
  long long total = 0;
  for (const auto& cf : per_char) {
    deco += cf.character * static_cast<double>(cf.flow);
    total += cf.flow;
  }
  if (std::abs(direct - deco) > kRouteTol)
    fail(ErrorKind::InternalInconsistency,
         "direct gamma spectral flow disagrees with the eigenspace decomposition");
  FlowResult r;
  r.partition = p;
  r.per_character = std::move(per_char);
  r.value.gamma_id = gamma_id;
  if (identity) {
    r.value.value = static_cast<double>(total);
    r.value.exact_integer = total;
  } else {
    r.value.value = direct;
  }
  return r;
}

// Split a curve family into per-weight subfamilies (entry weights may mix).
std::map<int, CurveFamily> split_by_weight(const CurveFamily& f, int base_shift) {
  std::map<int, CurveFamily> out;
  for (const auto& entry : f.curves) {
    for (const auto& wc : entry.weights) {
      CurveEntry e;
      e.curve = entry.curve;
      e.weights = {{wc.weight + base_shift, wc.count}};
      out[wc.weight + base_shift].curves.push_back(std::move(e));
    }
  }
  return out;
}

SymmetryAction mode_action(const ModeEntry& mode, const GroupAngle& gamma) {
  std::vector<cplx> d;
  d.reserve(mode.fiber_weights.size());
  for (int w : mode.fiber_weights) d.push_back(gamma.character(w + mode.base_weight));
  return decompose(ComplexMatrix::diag(d), gamma.id);
}

SampledFamily restrict_family(const SampledFamily& f, const Character& c) {
  std::vector<HermitianBlock> blocks;
  blocks.reserve(f.blocks.size());
  for (const auto& b : f.blocks)
    blocks.emplace_back(c.basis.adjoint() * (b.matrix * c.basis), 1e-9);
  return SampledFamily(f.times, std::move(blocks), f.lipschitz_bound);
}

}  // namespace

// ---------------------------------------------------------------------------

long long sfl(const SampledFamily& f, const FlowPartition& p) {
  require_certified(f, p);
  std::map<double, std::vector<SpectrumPoint>> cache;
  auto at = [&](double t) -> const std::vector<SpectrumPoint>& {
    auto it = cache.find(t);
    if (it == cache.end()) it = cache.emplace(t, spectrum_at(f, t)).first;
    return it->second;
  };
  std::vector<double> endvals;
  for (const auto& pt : at(0.0)) endvals.push_back(pt.value);
  guard_endpoint(endvals);
  endvals.clear();
  for (const auto& pt : at(1.0)) endvals.push_back(pt.value);
  guard_endpoint(endvals);

  long long total = 0;
  for (int k = 0; k < p.segments(); ++k)
    total += count_in_window(at(p.times[k + 1]), p.radii[k]) -
             count_in_window(at(p.times[k]), p.radii[k]);
  return total;
}

long long sfl(const CurveFamily& f, const FlowPartition& p) {
  require_certified(f, p);
  long long total = 0;
  for (int k = 0; k < p.segments(); ++k)
    total += count_in_window(spectrum_at(f, p.times[k + 1]), p.radii[k]) -
             count_in_window(spectrum_at(f, p.times[k]), p.radii[k]);
  return total;
}

long long sfl(const ModeBlockFamily& f, const FlowPartition& p) {
  f.validate();
  require_certified(f, p);
  for (const auto& mode : f.modes) {
    if (!mode.sampled) continue;
    for (double t : {0.0, 1.0}) {
      std::vector<double> vals;
      for (const auto& pt : spectrum_at(*mode.sampled, t)) vals.push_back(pt.value);
      guard_endpoint(vals);
    }
  }
  long long total = 0;
  for (int k = 0; k < p.segments(); ++k)
    total += count_in_window(spectrum_at(f, p.times[k + 1]), p.radii[k]) -
             count_in_window(spectrum_at(f, p.times[k]), p.radii[k]);
  return total;
}

// ---------------------------------------------------------------------------

FlowResult sfl_equivariant(const SampledFamily& f, const SymmetryAction& action,
                           const FlowPartition& p) {
  require_certified(f, p);
  for (const auto& b : f.blocks)
    if (!check_commutes(action, b))
      fail(ErrorKind::NotEquivariant, "family does not commute with the symmetry");

  std::map<double, EigenSystem> cache;
  auto at = [&](double t) -> const EigenSystem& {
    auto it = cache.find(t);
    if (it == cache.end()) it = cache.emplace(t, eigh(f.at(t))).first;
    return it->second;
  };
  guard_endpoint(at(0.0).values);
  guard_endpoint(at(1.0).values);

  auto window_trace = [&](double t, double a) -> cplx {
    const EigenSystem& es = at(t);
    std::vector<int> idx;
    for (int i = 0; i < static_cast<int>(es.values.size()); ++i)
      if (es.values[i] >= 0.0 && es.values[i] <= a) idx.push_back(i);
    if (idx.empty()) return 0.0;
    return equivariant_trace(action, es.vectors.columns(idx)).value;
  };

  cplx direct = 0.0;
  for (int k = 0; k < p.segments(); ++k)
    direct += window_trace(p.times[k + 1], p.radii[k]) - window_trace(p.times[k], p.radii[k]);

  std::vector<CharacterFlow> per_char;
  for (const auto& c : action.characters) {
    const SampledFamily sub = restrict_family(f, c);
    PartitionOptions opts;
    opts.margin_min = p.margin_min;
    const FlowPartition sub_p = build_flow_partition(sub, opts);
    per_char.push_back({c.value, sfl(sub, sub_p)});
  }
  return assemble_result(direct, std::move(per_char), action.is_identity(), action.label, p);
}

FlowResult sfl_equivariant(const CurveFamily& f, const GroupAngle& gamma,
                           const FlowPartition& p) {
  require_certified(f, p);
  cplx direct = 0.0;
  for (int k = 0; k < p.segments(); ++k)
    direct += weights_trace_in_window(spectrum_at(f, p.times[k + 1]), p.radii[k], gamma) -
              weights_trace_in_window(spectrum_at(f, p.times[k]), p.radii[k], gamma);

  std::vector<CharacterFlow> per_char;
  PartitionOptions opts;
  opts.margin_min = p.margin_min;
  for (const auto& [w, sub] : split_by_weight(f, 0)) {
    const FlowPartition sub_p = build_flow_partition(sub, opts);
    long long flow = 0;
    for (int k = 0; k < sub_p.segments(); ++k)
      flow += count_in_window(spectrum_at(sub, sub_p.times[k + 1]), sub_p.radii[k]) -
              count_in_window(spectrum_at(sub, sub_p.times[k]), sub_p.radii[k]);
    per_char.push_back({gamma.character(w), flow});
  }
  return assemble_result(direct, std::move(per_char), gamma.is_identity(), gamma.id, p);
}

FlowResult sfl_equivariant(const ModeBlockFamily& f, const GroupAngle& gamma,
                           const FlowPartition& p) {
  f.validate();
  require_certified(f, p);
  PartitionOptions opts;
  opts.margin_min = p.margin_min;

  // Route (a): window traces on the given partition, summed across modes.
  std::vector<CurveFamily> shifted_curves;
  std::vector<const SampledFamily*> sampled_modes;
  std::vector<SymmetryAction> sampled_actions;
  for (const auto& mode : f.modes) {
    if (mode.curves) {
      CurveFamily shifted = *mode.curves;
      for (auto& entry : shifted.curves)
        for (auto& wc : entry.weights) wc.weight += mode.base_weight;
      shifted_curves.push_back(std::move(shifted));
    } else {
      sampled_modes.push_back(&*mode.sampled);
      sampled_actions.push_back(mode_action(mode, gamma));
    }
  }

  std::map<std::pair<int, double>, EigenSystem> cache;
  auto eig_at = [&](int m, double t) -> const EigenSystem& {
    auto key = std::make_pair(m, t);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, eigh(sampled_modes[m]->at(t))).first;
    return it->second;
  };
  for (size_t m = 0; m < sampled_modes.size(); ++m) {
    guard_endpoint(eig_at(static_cast<int>(m), 0.0).values);
    guard_endpoint(eig_at(static_cast<int>(m), 1.0).values);
  }

  auto window_trace = [&](double t, double a) -> cplx {
    cplx tr = 0.0;
    for (const auto& cf : shifted_curves)
      tr += weights_trace_in_window(spectrum_at(cf, t), a, gamma);
    for (size_t m = 0; m < sampled_modes.size(); ++m) {
      const EigenSystem& es = eig_at(static_cast<int>(m), t);
      std::vector<int> idx;
      for (int i = 0; i < static_cast<int>(es.values.size()); ++i)
        if (es.values[i] >= 0.0 && es.values[i] <= a) idx.push_back(i);
      if (!idx.empty())
        tr += equivariant_trace(sampled_actions[m], es.vectors.columns(idx)).value;
    }
    return tr;
  };

  cplx direct = 0.0;
  for (int k = 0; k < p.segments(); ++k)
    direct += window_trace(p.times[k + 1], p.radii[k]) - window_trace(p.times[k], p.radii[k]);

  // Route (b): per-character integer flows with fresh partitions.
  std::vector<CharacterFlow> per_char;
  for (const auto& cf : shifted_curves) {
    for (const auto& [w, sub] : split_by_weight(cf, 0)) {
      const FlowPartition sub_p = build_flow_partition(sub, opts);
      per_char.push_back({gamma.character(w), sfl(sub, sub_p)});
    }
  }
  for (size_t m = 0; m < sampled_modes.size(); ++m) {
    for (const auto& c : sampled_actions[m].characters) {
      const SampledFamily sub = restrict_family(*sampled_modes[m], c);
      const FlowPartition sub_p = build_flow_partition(sub, opts);
      per_char.push_back({c.value, sfl(sub, sub_p)});
    }
  }
  return assemble_result(direct, std::move(per_char), gamma.is_identity(), gamma.id, p);
}

EquivariantValue negative_subspace_trace(const SampledFamily& f, const SymmetryAction& action,
                                         double t) {
  const EigenSystem es = eigh(f.at(t));
  guard_endpoint(es.values);
  std::vector<int> idx;
  for (int i = 0; i < static_cast<int>(es.values.size()); ++i)
    if (es.values[i] < 0.0) idx.push_back(i);
  if (idx.empty()) {
    EquivariantValue v;
    v.gamma_id = action.label;
    v.value = 0.0;
    v.exact_integer = action.is_identity() ? std::optional<long long>(0) : std::nullopt;
    return v;
  }
  return equivariant_trace(action, es.vectors.columns(idx));
}

// ---------------------------------------------------------------------------

SampledFamily reverse(const SampledFamily& f) {
  std::vector<double> times;
  std::vector<HermitianBlock> blocks;
  const size_t n = f.times.size();
  for (size_t i = n; i-- > 0;) {
    times.push_back(1.0 - f.times[i]);
    blocks.push_back(f.blocks[i]);
  }
  return SampledFamily(std::move(times), std::move(blocks), f.lipschitz_bound);
}

CurveFamily reverse(const CurveFamily& f) {
  CurveFamily out;
  for (const auto& entry : f.curves) {
    CurveEntry e;
    e.weights = entry.weights;
    for (size_t i = entry.curve.pieces.size(); i-- > 0;) {
      CurvePiece piece = entry.curve.pieces[i];
      const double lo = 1.0 - piece.t_hi, hi = 1.0 - piece.t_lo;
      piece.a = piece.a + piece.b;
      piece.b = -piece.b;
      piece.c0 = piece.c0 + piece.c1;
      piece.c1 = -piece.c1;
      piece.t_lo = lo;
      piece.t_hi = hi;
      e.curve.pieces.push_back(piece);
    }
    e.curve.validate();
    out.curves.push_back(std::move(e));
  }
  return out;
}

SampledFamily concat(const SampledFamily& a, const SampledFamily& b) {
  if (a.dim() != b.dim()) fail(ErrorKind::InvalidConcat, "dimension mismatch");
  if (max_abs_diff(a.blocks.back().matrix, b.blocks.front().matrix) > 1e-10)
    fail(ErrorKind::InvalidConcat, "endpoint blocks differ beyond tolerance");
  std::vector<double> times;
  std::vector<HermitianBlock> blocks;
  for (size_t i = 0; i < a.times.size(); ++i) {
    times.push_back(0.5 * a.times[i]);
    blocks.push_back(a.blocks[i]);
  }
  for (size_t i = 1; i < b.times.size(); ++i) {
    times.push_back(0.5 + 0.5 * b.times[i]);
    blocks.push_back(b.blocks[i]);
  }
  times.back() = 1.0;
  return SampledFamily(std::move(times), std::move(blocks),
                       2.0 * std::max(a.lipschitz_bound, b.lipschitz_bound));
}

namespace {

CurvePiece squeeze_piece(CurvePiece piece, double offset) {
  // Family time t in the half-interval corresponds to source time 2t - 2*offset.
  piece.a = piece.a - 2.0 * offset * piece.b;
  piece.b = 2.0 * piece.b;
  piece.c0 = piece.c0 - 2.0 * offset * piece.c1;
  piece.c1 = 2.0 * piece.c1;
  piece.t_lo = offset + 0.5 * piece.t_lo;
  piece.t_hi = offset + 0.5 * piece.t_hi;
  return piece;
}

}  // namespace

CurveFamily concat(const CurveFamily& a, const CurveFamily& b) {
  if (a.curves.size() != b.curves.size())
    fail(ErrorKind::InvalidConcat, "curve counts differ");
  auto key = [](const CurveEntry& e, double t) {
    return e.curve.eval(t);
  };
  std::vector<int> ia(a.curves.size()), ib(b.curves.size());
  for (size_t i = 0; i < ia.size(); ++i) ia[i] = static_cast<int>(i);
  for (size_t i = 0; i < ib.size(); ++i) ib[i] = static_cast<int>(i);
  std::stable_sort(ia.begin(), ia.end(), [&](int x, int y) {
    return key(a.curves[x], 1.0) < key(a.curves[y], 1.0);
  });
  std::stable_sort(ib.begin(), ib.end(), [&](int x, int y) {
    return key(b.curves[x], 0.0) < key(b.curves[y], 0.0);
  });
  CurveFamily out;
  for (size_t i = 0; i < ia.size(); ++i) {
    const CurveEntry& ea = a.curves[ia[i]];
    const CurveEntry& eb = b.curves[ib[i]];
    if (std::abs(ea.curve.eval(1.0) - eb.curve.eval(0.0)) > 1e-10)
      fail(ErrorKind::InvalidConcat, "curve junction values differ beyond tolerance");
    if (ea.weights.size() != eb.weights.size())
      fail(ErrorKind::InvalidConcat, "curve junction weights differ");
    for (size_t w = 0; w < ea.weights.size(); ++w)
      if (ea.weights[w].weight != eb.weights[w].weight ||
          ea.weights[w].count != eb.weights[w].count)
        fail(ErrorKind::InvalidConcat, "curve junction weights differ");
    CurveEntry e;
    e.weights = ea.weights;
    for (const auto& piece : ea.curve.pieces) e.curve.pieces.push_back(squeeze_piece(piece, 0.0));
    for (const auto& piece : eb.curve.pieces) e.curve.pieces.push_back(squeeze_piece(piece, 0.5));
    e.curve.pieces.front().t_lo = 0.0;
    e.curve.pieces.back().t_hi = 1.0;
    e.curve.validate();
    out.curves.push_back(std::move(e));
  }
  return out;
}

namespace {

SampledFamily resample(const SampledFamily& f, const std::vector<double>& times) {
  std::vector<HermitianBlock> blocks;
  blocks.reserve(times.size());
  for (double t : times) blocks.push_back(f.at(t));
  return SampledFamily(times, std::move(blocks), f.lipschitz_bound);
}

std::vector<double> union_times(const std::vector<double>& a, const std::vector<double>& b) {
  std::set<double> s(a.begin(), a.end());
  s.insert(b.begin(), b.end());
  return {s.begin(), s.end()};
}

double measured_lipschitz(const std::vector<double>& times,
                          const std::vector<HermitianBlock>& blocks) {
  double lip = 0.0;
  for (size_t i = 0; i + 1 < times.size(); ++i) {
    const EigenSystem es = eigh(HermitianBlock(blocks[i + 1].matrix - blocks[i].matrix, 1e-8));
    double nrm = 0.0;
    for (double lam : es.values) nrm = std::max(nrm, std::abs(lam));
    lip = std::max(lip, nrm / (times[i + 1] - times[i]));
  }
  return lip;
}

}  // namespace

SampledFamily direct_sum(const SampledFamily& a, const SampledFamily& b) {
  const std::vector<double> times = union_times(a.times, b.times);
  const SampledFamily ra = resample(a, times);
  const SampledFamily rb = resample(b, times);
  std::vector<HermitianBlock> blocks;
  blocks.reserve(times.size());
  for (size_t i = 0; i < times.size(); ++i)
    blocks.emplace_back(ComplexMatrix::direct_sum(ra.blocks[i].matrix, rb.blocks[i].matrix),
                        1e-9);
  return SampledFamily(times, std::move(blocks),
                       std::max(a.lipschitz_bound, b.lipschitz_bound));
}

CurveFamily direct_sum(const CurveFamily& a, const CurveFamily& b) {
  CurveFamily out = a;
  out.curves.insert(out.curves.end(), b.curves.begin(), b.curves.end());
  return out;
}

SymmetryAction direct_sum(const SymmetryAction& a, const SymmetryAction& b) {
  return decompose(ComplexMatrix::direct_sum(a.unitary, b.unitary),
                   a.label == b.label ? a.label : a.label + "+" + b.label);
}

SampledFamily congruence_homotopy(const SampledFamily& f, const SampledFamily& weights,
                                  double s) {
  if (f.dim() != weights.dim()) fail(ErrorKind::InvalidInput, "weight dimension mismatch");
  const ComplexMatrix eye = ComplexMatrix::identity(f.dim());
  if (max_abs_diff(weights.blocks.front().matrix, eye) > 1e-12 ||
      max_abs_diff(weights.blocks.back().matrix, eye) > 1e-12)
    fail(ErrorKind::InvalidInput, "congruence weights must equal I at both endpoints");

  const std::vector<double> times = union_times(f.times, weights.times);
  std::vector<HermitianBlock> blocks;
  blocks.reserve(times.size());
  for (double t : times) {
    const HermitianBlock n = weights.at(t);
    const EigenSystem es = eigh(n);
    if (es.values.front() <= 0.0)
      fail(ErrorKind::InvalidInput, "congruence weights must be positive definite");
    const ComplexMatrix root = hermitian_power(es, 0.5 * s);
    blocks.emplace_back(root * (f.at(t).matrix * root), 1e-9);
  }
  const double lip = measured_lipschitz(times, blocks);
  return SampledFamily(times, std::move(blocks), lip);
}

}  // namespace specflow
