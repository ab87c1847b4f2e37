#include "specflow/eta.hpp"

#include <algorithm>
#include <cmath>

namespace specflow {

namespace {

constexpr double kUnitTol = 1e-12;

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// zeta_H(0, a) = 1/2 - a.
double hurwitz_at_zero(double a) { return 0.5 - a; }

}  // namespace

void CharacterSpectrum::validate() const {
  for (const auto& p : progressions) {
    if (!(p.offset > 0.0) || p.offset > 1.0)
      fail(ErrorKind::InvalidInput, "progression offset must lie in (0, 1]");
    if (!(p.step > 0.0)) fail(ErrorKind::InvalidInput, "progression step must be positive");
    if (std::abs(std::abs(p.ratio) - 1.0) > kUnitTol)
      fail(ErrorKind::InvalidInput, "character ratio must have unit modulus");
  }
  for (const auto& f : finite)
    if (f.multiplicity <= 0) fail(ErrorKind::InvalidInput, "multiplicity must be positive");
}

cplx CharacterSpectrum::kernel_trace() const {
  cplx t = 0.0;
  for (const auto& f : finite)
    if (f.value == 0.0) t += static_cast<double>(f.multiplicity) * f.character;
  return t;
}

EquivariantValue eta_closed_form(const CharacterSpectrum& spectrum) {
  spectrum.validate();
  cplx eta = 0.0;
  for (const auto& f : spectrum.finite)
    eta += sign_of(f.value) * static_cast<double>(f.multiplicity) * f.character;

  for (const auto& p : spectrum.progressions) {
    if (std::abs(p.ratio - cplx(1.0, 0.0)) > kUnitTol)
      fail(ErrorKind::UseNumericOracle,
           "nontrivial character ratio with infinite support has no Hurwitz closed form here");
    // The continuation at s = 0 is scale-free, so the step drops out.
    if (p.offset < 1.0) {
      eta += p.w_pos * hurwitz_at_zero(p.offset);
      eta -= p.w_neg * hurwitz_at_zero(1.0 - p.offset);
    } else {
      // Offset 1: the zero element is excluded; both branches continue to
      // zeta(0, 1) = -1/2.
      eta += p.w_pos * (-0.5);
      eta -= p.w_neg * (-0.5);
    }
  }
  EquivariantValue out;
  out.value = eta;
  out.gamma_id = spectrum.gamma_id;
  return out;
}

namespace {

cplx abel_sum(const CharacterSpectrum& spectrum, double r, double tail_tol,
              bool reverse_order) {
  cplx total = 0.0;
  for (const auto& f : spectrum.finite) {
    if (f.value == 0.0) continue;
    total += sign_of(f.value) * static_cast<double>(f.multiplicity) * f.character *
             std::pow(r, std::abs(f.value));
  }
  const double lnr = std::log(r);
  for (const auto& p : spectrum.progressions) {
    const double wmax = std::max({std::abs(p.w_pos), std::abs(p.w_neg), 1.0});
    // Beyond j_max the two geometric tails together stay under tail_tol.
    const double denom = 1.0 - std::pow(r, p.step);
    const long j_max = std::max(
        8L, std::lround(std::ceil(std::log(tail_tol * denom / (2.0 * wmax)) / (p.step * lnr))));

    auto pos_term = [&](long j) {
      const double v = p.step * (j + p.offset);
      return p.w_pos * std::pow(p.ratio, static_cast<double>(j)) * std::pow(r, v);
    };
    auto neg_term = [&](long m) -> cplx {  // element j = -1 - m
      const double v = p.step * (m + 1.0 - p.offset);
      if (v == 0.0) return 0.0;  // offset 1, m = 0: the kernel element
      return -p.w_neg * std::pow(p.ratio, static_cast<double>(-m)) * std::pow(r, v);
    };
    if (!reverse_order) {
      for (long j = 0; j <= j_max; ++j) total += pos_term(j) + neg_term(j);
    } else {
      for (long j = j_max; j >= 0; --j) total += pos_term(j) + neg_term(j);
    }
  }
  return total;
}

}  // namespace

AbelEvaluation eta_abel_oracle(const CharacterSpectrum& spectrum, const AbelOptions& opts) {
  spectrum.validate();
  if (opts.k_max - opts.k_min < 2 || opts.k_min < 1)
    fail(ErrorKind::InvalidInput, "need at least three extrapolation levels");

  const int levels = opts.k_max - opts.k_min + 1;
  std::vector<double> x(levels);
  std::vector<cplx> t(levels);
  for (int k = 0; k < levels; ++k) {
    x[k] = opts.x_scale * std::pow(2.0, -(opts.k_min + k));
    t[k] = abel_sum(spectrum, 1.0 - x[k], opts.tail_tol, opts.reverse_order);
  }

  // Neville elimination of the expansion in powers of x = 1 - r.
  cplx prev_diag = t.back();
  for (int j = 1; j < levels; ++j) {
    if (j == levels - 1) prev_diag = t.back();
    for (int i = levels - 1; i >= j; --i) {
      const double factor = x[i - j] / x[i];
      t[i] = t[i] + (t[i] - t[i - 1]) / (factor - 1.0);
    }
  }
  AbelEvaluation out;
  out.value.value = t.back();
  out.value.gamma_id = spectrum.gamma_id;
  out.residual = std::abs(t.back() - prev_diag);
  if (!(out.residual <= opts.residual_tol) || !std::isfinite(out.residual))
    fail(ErrorKind::NoConvergence, "Abel extrapolation residual exceeds tolerance");
  return out;
}

BoundaryTerm boundary_term(const CharacterSpectrum& a0, const CharacterSpectrum& a1) {
  BoundaryTerm bt;
  bt.ker0 = a0.kernel_trace();
  bt.ker1 = a1.kernel_trace();
  bt.eta_method = "closed";
  auto eta_of = [&](const CharacterSpectrum& s) -> cplx {
    try {
      return eta_closed_form(s).value;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::UseNumericOracle) throw;
      bt.eta_method = "abel";
      return eta_abel_oracle(s).value.value;
    }
  };
  bt.eta0 = eta_of(a0);
  bt.eta1 = eta_of(a1);
  bt.b_value.value = -0.5 * (bt.ker0 + bt.ker1 + bt.eta0 - bt.eta1);
  bt.b_value.gamma_id = a0.gamma_id;
  return bt;
}

}  // namespace specflow
