#include "specflow/family.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "specflow/eigh.hpp"

namespace specflow {

cplx GroupAngle::character(int weight) const {
  if (phi == 0.0 || weight == 0) return cplx(1.0, 0.0);
  return std::polar(1.0, weight * phi);
}

cplx character_trace(const std::vector<WeightedCount>& weights, const GroupAngle& gamma) {
  cplx t = 0.0;
  for (const auto& wc : weights) t += static_cast<double>(wc.count) * gamma.character(wc.weight);
  return t;
}

int total_count(const std::vector<WeightedCount>& weights) {
  int n = 0;
  for (const auto& wc : weights) n += wc.count;
  return n;
}

// ---------------------------------------------------------------------------

namespace {

double spectral_norm(const ComplexMatrix& hermitian) {
  const EigenSystem es = eigh(HermitianBlock(hermitian, 1e-8));
  double m = 0.0;
  for (double lam : es.values) m = std::max(m, std::abs(lam));
  return m;
}

}  // namespace

SampledFamily::SampledFamily(std::vector<double> t, std::vector<HermitianBlock> b,
                             double lipschitz)
    : times(std::move(t)), blocks(std::move(b)), lipschitz_bound(lipschitz) {
  if (times.size() != blocks.size() || times.size() < 2)
    fail(ErrorKind::InvalidInput, "sampled family needs matching times/blocks, at least two");
  if (times.front() != 0.0 || times.back() != 1.0)
    fail(ErrorKind::InvalidInput, "sample times must cover [0,1]");
  for (size_t i = 1; i < times.size(); ++i) {
    if (times[i] <= times[i - 1])
      fail(ErrorKind::InvalidInput, "sample times must be strictly increasing");
    if (blocks[i].dim() != blocks[0].dim())
      fail(ErrorKind::InvalidInput, "sample dimensions must agree");
  }
  if (lipschitz_bound < 0.0) fail(ErrorKind::InvalidInput, "lipschitz bound must be >= 0");
  for (size_t i = 0; i + 1 < times.size(); ++i) {
    const double dt = times[i + 1] - times[i];
    const double step = spectral_norm(blocks[i + 1].matrix - blocks[i].matrix);
    if (step > lipschitz_bound * dt * (1.0 + kLipSlack))
      fail(ErrorKind::InvalidInput, "consecutive samples violate the Lipschitz bound");
  }
}

int SampledFamily::interval_of(double t) const {
  if (t < 0.0 || t > 1.0) fail(ErrorKind::InvalidInput, "time outside [0,1]");
  int lo = 0, hi = static_cast<int>(times.size()) - 1;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (times[mid] <= t)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

HermitianBlock SampledFamily::at(double t) const {
  for (size_t i = 0; i < times.size(); ++i)
    if (t == times[i]) return blocks[i];
  const int i = interval_of(t);
  const double w = (t - times[i]) / (times[i + 1] - times[i]);
  ComplexMatrix m = blocks[i].matrix.scaled(1.0 - w) + blocks[i + 1].matrix.scaled(w);
  return HermitianBlock(std::move(m), 1e-9);
}

double SampledFamily::interval_slope(int i) const {
  const double dt = times[i + 1] - times[i];
  return spectral_norm(blocks[i + 1].matrix - blocks[i].matrix) / dt;
}

// ---------------------------------------------------------------------------

double CurvePiece::eval(double t) const {
  switch (form) {
    case Form::Affine:
      return a + b * t;
    case Form::BergerRound: {
      const double c = metric_at(t);
      return 0.5 * c + static_cast<double>(n) / c;
    }
    case Form::BergerBranch: {
      const double c = metric_at(t);
      const double m = static_cast<double>(2 * p - n);
      const double q = 4.0 * p * (n - p);
      return 0.5 * c + br_sign * std::sqrt(q + (m / c) * (m / c));
    }
  }
  return 0.0;
}

double CurvePiece::deriv_bound() const {
  switch (form) {
    case Form::Affine:
      return std::abs(b);
    case Form::BergerRound: {
      // d/dt = c1 (1/2 - n/c^2); monotone in c, so extremes at the ends.
      const double ca = metric_at(t_lo), cb = metric_at(t_hi);
      const double da = 0.5 - n / (ca * ca), db = 0.5 - n / (cb * cb);
      return std::abs(c1) * std::max(std::abs(da), std::abs(db));
    }
    case Form::BergerBranch: {
      const double m = static_cast<double>(2 * p - n);
      const double q = 4.0 * p * (n - p);
      const double cmin = std::min(metric_at(t_lo), metric_at(t_hi));
      double extra = 0.0;
      if (m != 0.0) extra = (m * m) / (cmin * cmin * cmin * std::sqrt(q));
      return std::abs(c1) * (0.5 + extra);
    }
  }
  return 0.0;
}

Curve Curve::affine(double a, double b) {
  Curve c;
  CurvePiece piece;
  piece.form = CurvePiece::Form::Affine;
  piece.t_lo = 0.0;
  piece.t_hi = 1.0;
  piece.a = a;
  piece.b = b;
  c.pieces.push_back(piece);
  return c;
}

Curve Curve::berger_round(int n, double c_start, double c_end) {
  Curve c;
  CurvePiece piece;
  piece.form = CurvePiece::Form::BergerRound;
  piece.t_lo = 0.0;
  piece.t_hi = 1.0;
  piece.c0 = c_start;
  piece.c1 = c_end - c_start;
  piece.n = n;
  c.pieces.push_back(piece);
  c.validate();
  return c;
}

Curve Curve::berger_branch(int n, int p, double sign, double c_start, double c_end) {
  Curve c;
  CurvePiece piece;
  piece.form = CurvePiece::Form::BergerBranch;
  piece.t_lo = 0.0;
  piece.t_hi = 1.0;
  piece.c0 = c_start;
  piece.c1 = c_end - c_start;
  piece.n = n;
  piece.p = p;
  piece.br_sign = sign;
  c.pieces.push_back(piece);
  c.validate();
  return c;
}

double Curve::eval(double t) const {
  for (const auto& piece : pieces) {
    if (t >= piece.t_lo && t <= piece.t_hi) return piece.eval(t);
  }
  fail(ErrorKind::InvalidInput, "curve evaluated outside [0,1]");
}

double Curve::deriv_bound(double s, double e) const {
  double bound = 0.0;
  for (const auto& piece : pieces) {
    if (piece.t_hi <= s || piece.t_lo >= e) continue;
    bound = std::max(bound, piece.deriv_bound());
  }
  return bound;
}

void Curve::validate() const {
  if (pieces.empty()) fail(ErrorKind::InvalidInput, "curve has no pieces");
  if (pieces.front().t_lo != 0.0 || pieces.back().t_hi != 1.0)
    fail(ErrorKind::InvalidInput, "curve pieces must cover [0,1]");
  for (size_t i = 0; i < pieces.size(); ++i) {
    const auto& piece = pieces[i];
    if (i > 0 && pieces[i - 1].t_hi != piece.t_lo)
      fail(ErrorKind::InvalidInput, "curve pieces must be contiguous");
    if (piece.form != CurvePiece::Form::Affine) {
      if (piece.metric_at(piece.t_lo) <= 0.0 || piece.metric_at(piece.t_hi) <= 0.0)
        fail(ErrorKind::InvalidInput, "metric parameter must stay positive");
      if (piece.n <= 0) fail(ErrorKind::InvalidInput, "representation index must be positive");
    }
    if (piece.form == CurvePiece::Form::BergerBranch) {
      if (piece.p <= 0 || piece.p >= piece.n)
        fail(ErrorKind::InvalidInput, "branch needs 0 < p < n");
      if (piece.br_sign != 1.0 && piece.br_sign != -1.0)
        fail(ErrorKind::InvalidInput, "branch sign must be +1 or -1");
    }
  }
}

int CurveFamily::dim() const {
  int d = 0;
  for (const auto& entry : curves) d += entry.multiplicity();
  return d;
}

std::vector<ZeroCrossing> find_zero_crossings(const CurveFamily& family) {
  std::vector<ZeroCrossing> out;
  const int grid = 4096;
  for (size_t ci = 0; ci < family.curves.size(); ++ci) {
    const Curve& curve = family.curves[ci].curve;
    double prev_t = 0.0;
    double prev_v = curve.eval(0.0);
    if (prev_v == 0.0)
      out.push_back({static_cast<int>(ci), 0.0, 0.0});
    for (int g = 1; g <= grid; ++g) {
      const double t = static_cast<double>(g) / grid;
      const double v = curve.eval(t);
      if (v == 0.0) {
        const double slope = v - prev_v;
        out.push_back({static_cast<int>(ci), t, slope > 0 ? 1.0 : (slope < 0 ? -1.0 : 0.0)});
      } else if (prev_v != 0.0 && ((prev_v < 0.0) != (v < 0.0))) {
        double lo = prev_t, hi = t, vlo = prev_v;
        while (hi - lo > 1e-12) {
          const double mid = 0.5 * (lo + hi);
          const double vm = curve.eval(mid);
          if (vm == 0.0) {
            lo = hi = mid;
            break;
          }
          if ((vm < 0.0) == (vlo < 0.0)) {
            lo = mid;
            vlo = vm;
          } else {
            hi = mid;
          }
        }
        out.push_back({static_cast<int>(ci), 0.5 * (lo + hi), prev_v < 0.0 ? 1.0 : -1.0});
      }
      prev_t = t;
      prev_v = v;
    }
  }
  std::sort(out.begin(), out.end(),
            [](const ZeroCrossing& a, const ZeroCrossing& b) { return a.t < b.t; });
  return out;
}

// ---------------------------------------------------------------------------

int ModeEntry::dim() const {
  if (sampled) return sampled->dim();
  if (curves) return curves->dim();
  return 0;
}

int ModeBlockFamily::dim() const {
  int d = 0;
  for (const auto& m : modes) d += m.dim();
  return d;
}

void ModeBlockFamily::validate() const {
  std::set<int> labels;
  for (const auto& m : modes) {
    if (!labels.insert(m.label).second)
      fail(ErrorKind::InvalidInput, "mode labels must be unique");
    if (m.sampled.has_value() == m.curves.has_value())
      fail(ErrorKind::InvalidInput, "mode entry must carry exactly one representation");
    if (m.sampled && static_cast<int>(m.fiber_weights.size()) != m.sampled->dim())
      fail(ErrorKind::InvalidInput, "sampled mode needs one fiber weight per dimension");
  }
}

ModeBlockFamily truncate_modes(const ModeBlockFamily& family, int j_max) {
  if (j_max < 1) fail(ErrorKind::InvalidInput, "j_max must be >= 1");
  ModeBlockFamily out;
  out.truncation_limit = j_max;
  for (const auto& m : family.modes)
    if (std::abs(m.label) <= j_max) out.modes.push_back(m);
  return out;
}

// ---------------------------------------------------------------------------

std::vector<SpectrumPoint> spectrum_at(const SampledFamily& f, double t) {
  const EigenSystem es = eigh(f.at(t));
  std::vector<SpectrumPoint> out;
  out.reserve(es.values.size());
  for (double v : es.values) out.push_back({v, 1, {}});
  return out;
}

std::vector<SpectrumPoint> spectrum_at(const CurveFamily& f, double t) {
  std::vector<SpectrumPoint> out;
  out.reserve(f.curves.size());
  for (const auto& entry : f.curves)
    out.push_back({entry.curve.eval(t), entry.multiplicity(), entry.weights});
  std::stable_sort(out.begin(), out.end(),
                   [](const SpectrumPoint& a, const SpectrumPoint& b) { return a.value < b.value; });
  return out;
}

std::vector<SpectrumPoint> spectrum_at(const ModeBlockFamily& f, double t) {
  std::vector<SpectrumPoint> out;
  for (const auto& mode : f.modes) {
    if (mode.sampled) {
      const EigenSystem es = eigh(mode.sampled->at(t));
      for (double v : es.values) out.push_back({v, 1, {}});
    } else if (mode.curves) {
      for (const auto& entry : mode.curves->curves) {
        std::vector<WeightedCount> shifted = entry.weights;
        for (auto& wc : shifted) wc.weight += mode.base_weight;
        out.push_back({entry.curve.eval(t), entry.multiplicity(), std::move(shifted)});
      }
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const SpectrumPoint& a, const SpectrumPoint& b) { return a.value < b.value; });
  return out;
}

std::vector<SpectrumPoint> spectrum_at(const FamilyRep& f, double t) {
  return std::visit([&](const auto& rep) { return spectrum_at(rep, t); }, f);
}

int family_dim(const FamilyRep& f) {
  return std::visit([](const auto& rep) { return rep.dim(); }, f);
}

}  // namespace specflow
