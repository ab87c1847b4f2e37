#include "specflow/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "specflow/eigh.hpp"

namespace specflow {

namespace {

using Interval = std::pair<double, double>;
using IntervalList = std::vector<Interval>;

IntervalList merge_intervals(IntervalList v) {
  if (v.empty()) return v;
  std::sort(v.begin(), v.end());
  IntervalList out;
  out.push_back(v.front());
  for (size_t i = 1; i < v.size(); ++i) {
    if (v[i].first <= out.back().second) {
      out.back().second = std::max(out.back().second, v[i].second);
    } else {
      out.push_back(v[i]);
    }
  }
  return out;
}

IntervalList symmetrize(const IntervalList& v) {
  IntervalList out = v;
  for (const auto& iv : v) out.push_back({-iv.second, -iv.first});
  return merge_intervals(std::move(out));
}

IntervalList expand(const IntervalList& v, double m) {
  IntervalList out;
  out.reserve(v.size());
  for (const auto& iv : v) out.push_back({iv.first - m, iv.second + m});
  return merge_intervals(std::move(out));
}

double dist_to(const IntervalList& v, double x) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& iv : v) {
    if (x >= iv.first && x <= iv.second) return 0.0;
    d = std::min(d, std::min(std::abs(x - iv.first), std::abs(x - iv.second)));
  }
  return d;
}

IntervalList fatten_points(const std::vector<double>& pts, double r) {
  IntervalList out;
  out.reserve(pts.size());
  for (double p : pts) out.push_back({p - r, p + r});
  return merge_intervals(std::move(out));
}

IntervalList intersect(const IntervalList& a, const IntervalList& b) {
  IntervalList out;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double lo = std::max(a[i].first, b[j].first);
    const double hi = std::min(a[i].second, b[j].second);
    if (lo <= hi) out.push_back({lo, hi});
    if (a[i].second < b[j].second)
      ++i;
    else
      ++j;
  }
  return out;
}

// Cached eigenvalue lists keyed by time (partition times are shared between
// adjacent segments; one evaluation keeps the in/out decisions consistent).
struct SpectrumCache {
  std::map<double, std::vector<double>> values;
};

// ---------------------------------------------------------------------------
// Envelope providers: a conservative superset of every value the spectrum can
// touch on [s, e].

const std::vector<double>& sampled_values_at(const SampledFamily& f, double t,
                                             SpectrumCache& cache) {
  auto it = cache.values.find(t);
  if (it != cache.values.end()) return it->second;
  std::vector<double> vals = eigh(f.at(t)).values;
  return cache.values.emplace(t, std::move(vals)).first->second;
}

IntervalList forbidden_sampled(const SampledFamily& f, double s, double e,
                               SpectrumCache& cache) {
  const int is = f.interval_of(s);
  // Segments produced here never span a sample boundary, so the interval
  // slope is the exact derivative norm of the linear interpolant.
  const double slope = f.interval_slope(std::min(is, static_cast<int>(f.times.size()) - 2));
  const double reach = slope * (e - s);
  const auto& sv = sampled_values_at(f, s, cache);
  const auto& ev = sampled_values_at(f, e, cache);
  // A value x is reachable only if dist(x, spec(s)) + dist(x, spec(e)) <=
  // reach; the intersection of the two fattened spectra contains that set.
  return intersect(fatten_points(sv, reach), fatten_points(ev, reach));
}

IntervalList forbidden_curves(const CurveFamily& f, double s, double e) {
  IntervalList out;
  for (const auto& entry : f.curves) {
    const double va = entry.curve.eval(s);
    const double vb = entry.curve.eval(e);
    double c = entry.curve.deriv_bound(s, e) * (e - s);
    c = std::max(c, std::abs(vb - va));
    const double r = 0.5 * (c - std::abs(vb - va));
    out.push_back({std::min(va, vb) - r, std::max(va, vb) + r});
  }
  return merge_intervals(std::move(out));
}

struct ModeCaches {
  std::map<int, SpectrumCache> per_mode;
};

IntervalList forbidden_modes(const ModeBlockFamily& f, double s, double e, ModeCaches& caches) {
  IntervalList out;
  for (const auto& mode : f.modes) {
    IntervalList part;
    if (mode.sampled) {
      part = forbidden_sampled(*mode.sampled, s, e, caches.per_mode[mode.label]);
    } else {
      part = forbidden_curves(*mode.curves, s, e);
    }
    out.insert(out.end(), part.begin(), part.end());
  }
  return merge_intervals(std::move(out));
}

// ---------------------------------------------------------------------------

struct WindowChoice {
  bool ok = false;
  double radius = 0.0;
  double margin = 0.0;
};

WindowChoice choose_window(const IntervalList& forbidden, const PartitionOptions& opts) {
  WindowChoice w;
  if (forbidden.empty()) {
    w.ok = true;
    w.radius = 1.0;
    w.margin = std::numeric_limits<double>::infinity();
    return w;
  }
  const IntervalList sym = symmetrize(forbidden);
  const IntervalList fat = expand(sym, opts.margin_min);
  const double cap = std::max(std::abs(sym.front().first), std::abs(sym.back().second)) + 1.0;

  // Candidate radii live in the gaps of the fattened symmetric set.
  struct Gap {
    double lo, hi;        // valid radii (intersected with (0, cap])
    bool straddles_zero;  // the untouched gap contains 0
  };
  std::vector<Gap> gaps;
  auto add_gap = [&](double lo, double hi, bool strad) {
    const double glo = std::max(lo, 0.0);
    const double ghi = std::min(hi, cap);
    if (ghi > glo) gaps.push_back({glo, ghi, strad});
  };
  if (fat.front().first > -cap) add_gap(-cap, fat.front().first, false);
  for (size_t i = 0; i + 1 < fat.size(); ++i)
    add_gap(fat[i].second, fat[i + 1].first,
            fat[i].second < 0.0 && fat[i + 1].first > 0.0);
  add_gap(fat.back().second, cap, false);
  if (gaps.empty()) return w;

  double radius = -1.0;
  if (!opts.alternative_windows) {
    // Preferred: half the invertibility gap when the spectrum stays away
    // from zero over the whole segment; otherwise the widest valid gap.
    const double beta = dist_to(sym, 0.0);
    if (beta >= 2.0 * opts.margin_min) {
      radius = 0.5 * beta;
    } else {
      size_t best = 0;
      double best_width = -1.0;
      for (size_t i = 0; i < gaps.size(); ++i) {
        const double width = gaps[i].hi - gaps[i].lo;
        if (width > best_width + 1e-18) {
          best_width = width;
          best = i;
        }
      }
      radius = 0.5 * (gaps[best].lo + gaps[best].hi);
    }
  } else {
    // Different admissible choice: the highest gap, off-midpoint.
    const Gap& g = gaps.back();
    radius = g.lo + 0.75 * (g.hi - g.lo);
  }
  if (radius <= 0.0) return w;
  const double margin = std::min(dist_to(forbidden, radius), dist_to(forbidden, -radius));
  if (margin < opts.margin_min) return w;
  w.ok = true;
  w.radius = radius;
  w.margin = margin;
  return w;
}

std::vector<double> initial_breaks_sampled(const SampledFamily& f) {
  return f.times;
}

std::vector<double> initial_breaks_curves(const CurveFamily& f) {
  std::set<double> breaks{0.0, 1.0};
  for (const auto& entry : f.curves)
    for (const auto& piece : entry.curve.pieces) {
      breaks.insert(piece.t_lo);
      breaks.insert(piece.t_hi);
    }
  // Crossings are isolated up front: each becomes a partition time (interior
  // window-count contributions at shared times cancel in the telescoped sum).
  for (const auto& x : find_zero_crossings(f)) {
    if (x.t > 1e-9 && x.t < 1.0 - 1e-9) breaks.insert(x.t);
  }
  return {breaks.begin(), breaks.end()};
}

template <typename ForbiddenFn>
FlowPartition build_from_breaks(std::vector<double> breaks, ForbiddenFn&& forbidden,
                                const PartitionOptions& opts) {
  if (opts.alternative_windows) {
    // Extra initial refinement so segment boundaries differ as well.
    std::vector<double> refined;
    for (size_t i = 0; i + 1 < breaks.size(); ++i) {
      refined.push_back(breaks[i]);
      refined.push_back(breaks[i] + (breaks[i + 1] - breaks[i]) / 3.0);
    }
    refined.push_back(breaks.back());
    breaks = std::move(refined);
  }

  FlowPartition part;
  part.margin_min = opts.margin_min;
  part.times.push_back(0.0);
  long produced = 0;

  // Depth-first left-to-right; failed segments split at their midpoint.
  std::vector<Interval> stack;
  for (size_t i = breaks.size(); i-- > 1;)
    stack.push_back({breaks[i - 1], breaks[i]});

  while (!stack.empty()) {
    const Interval seg = stack.back();
    stack.pop_back();
    const WindowChoice w = choose_window(forbidden(seg.first, seg.second), opts);
    if (!w.ok) {
      if (++produced > opts.max_segments || seg.second - seg.first < 1e-14)
        fail(ErrorKind::PartitionFailure,
             "cannot certify a flow partition within the refinement budget");
      const double mid = 0.5 * (seg.first + seg.second);
      stack.push_back({mid, seg.second});
      stack.push_back({seg.first, mid});
      continue;
    }
    if (++produced > opts.max_segments)
      fail(ErrorKind::PartitionFailure, "partition exceeded the segment budget");
    part.times.push_back(seg.second);
    part.radii.push_back(w.radius);
    part.margins.push_back(w.margin);
  }
  return part;
}

void check_partition_shape(const FlowPartition& p) {
  if (p.times.size() < 2 || p.radii.size() + 1 != p.times.size() ||
      p.margins.size() != p.radii.size())
    fail(ErrorKind::InvalidPartition, "malformed partition");
  if (p.times.front() != 0.0 || p.times.back() != 1.0)
    fail(ErrorKind::InvalidPartition, "partition must cover [0,1]");
  for (size_t i = 1; i < p.times.size(); ++i)
    if (p.times[i] <= p.times[i - 1])
      fail(ErrorKind::InvalidPartition, "partition times must increase");
  for (double a : p.radii)
    if (a <= 0.0) fail(ErrorKind::InvalidPartition, "window radii must be positive");
}

template <typename ForbiddenFn>
void require_certified_impl(const FlowPartition& p, ForbiddenFn&& forbidden) {
  check_partition_shape(p);
  for (int k = 0; k < p.segments(); ++k) {
    const auto f = forbidden(p.times[k], p.times[k + 1]);
    const double d = std::min(dist_to(f, p.radii[k]), dist_to(f, -p.radii[k]));
    if (d < 0.5 * std::min(p.margin_min, p.margins[k]))
      fail(ErrorKind::InvalidPartition, "partition certificate does not hold for this family");
  }
}

}  // namespace

FlowPartition build_flow_partition(const SampledFamily& f, const PartitionOptions& opts) {
  SpectrumCache cache;
  return build_from_breaks(
      initial_breaks_sampled(f),
      [&](double s, double e) { return forbidden_sampled(f, s, e, cache); }, opts);
}

FlowPartition build_flow_partition(const CurveFamily& f, const PartitionOptions& opts) {
  for (const auto& entry : f.curves) entry.curve.validate();
  return build_from_breaks(
      initial_breaks_curves(f),
      [&](double s, double e) { return forbidden_curves(f, s, e); }, opts);
}

FlowPartition build_flow_partition(const ModeBlockFamily& f, const PartitionOptions& opts) {
  f.validate();
  if (f.modes.empty()) fail(ErrorKind::InvalidInput, "mode family has no modes");
  std::set<double> breaks;
  for (const auto& mode : f.modes) {
    std::vector<double> b = mode.sampled ? initial_breaks_sampled(*mode.sampled)
                                         : initial_breaks_curves(*mode.curves);
    breaks.insert(b.begin(), b.end());
  }
  ModeCaches caches;
  return build_from_breaks(
      std::vector<double>(breaks.begin(), breaks.end()),
      [&](double s, double e) { return forbidden_modes(f, s, e, caches); }, opts);
}

FlowPartition build_flow_partition(const FamilyRep& f, const PartitionOptions& opts) {
  return std::visit([&](const auto& rep) { return build_flow_partition(rep, opts); }, f);
}

void require_certified(const SampledFamily& f, const FlowPartition& p) {
  SpectrumCache cache;
  require_certified_impl(p, [&](double s, double e) { return forbidden_sampled(f, s, e, cache); });
}

void require_certified(const CurveFamily& f, const FlowPartition& p) {
  require_certified_impl(p, [&](double s, double e) { return forbidden_curves(f, s, e); });
}

void require_certified(const ModeBlockFamily& f, const FlowPartition& p) {
  ModeCaches caches;
  require_certified_impl(p, [&](double s, double e) { return forbidden_modes(f, s, e, caches); });
}

bool verify_partition_dense(const FamilyRep& f, const FlowPartition& p,
                            int samples_per_segment) {
  for (int k = 0; k < p.segments(); ++k) {
    for (int j = 0; j <= samples_per_segment; ++j) {
      const double t =
          p.times[k] + (p.times[k + 1] - p.times[k]) * j / double(samples_per_segment);
      for (const auto& pt : spectrum_at(f, t)) {
        if (std::abs(pt.value - p.radii[k]) < 0.5 * p.margin_min) return false;
        if (std::abs(pt.value + p.radii[k]) < 0.5 * p.margin_min) return false;
      }
    }
  }
  return true;
}

}  // namespace specflow
