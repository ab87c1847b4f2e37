#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "specflow/complex_matrix.hpp"

namespace specflow {

// ---------------------------------------------------------------------------
// Group element for weight-labelled families: z = e^{i phi} on the circle, or
// the maximal-torus angle theta of an SU(2) element. A component of weight w
// carries the character e^{i w phi}. phi == 0 is the identity.
struct GroupAngle {
  double phi = 0.0;
  std::string id = "id";

  bool is_identity() const { return phi == 0.0; }
  cplx character(int weight) const;
};

// (weight, count): the gamma-eigenvalue decomposition of one eigenspace.
struct WeightedCount {
  int weight = 0;
  int count = 1;
};

cplx character_trace(const std::vector<WeightedCount>& weights, const GroupAngle& gamma);
int total_count(const std::vector<WeightedCount>& weights);

// ---------------------------------------------------------------------------
// Norm-continuous family sampled on a grid; between samples the family IS the
// linear interpolant (all downstream guarantees refer to it).
struct SampledFamily {
  std::vector<double> times;           // strictly increasing, 0 to 1
  std::vector<HermitianBlock> blocks;
  double lipschitz_bound = 0.0;        // operator-norm bound on dB/dt

  static constexpr double kLipSlack = 0.05;

  SampledFamily() = default;
  SampledFamily(std::vector<double> t, std::vector<HermitianBlock> b, double lipschitz);

  int dim() const { return blocks.empty() ? 0 : blocks.front().dim(); }
  HermitianBlock at(double t) const;
  // Exact spectral-norm slope ||B_{i+1}-B_i|| / dt of one sample interval.
  double interval_slope(int i) const;
  int interval_of(double t) const;
};

// ---------------------------------------------------------------------------
// Piecewise closed-form eigenvalue curves. The vocabulary is closed under
// affine reparametrizations of time, so reverse/concat stay exact.
struct CurvePiece {
  enum class Form { Affine, BergerRound, BergerBranch };
  Form form = Form::Affine;
  double t_lo = 0.0, t_hi = 1.0;

  // Affine: value(t) = a + b t.
  double a = 0.0, b = 0.0;
  // Berger forms use the metric parameter c(t) = c0 + c1 t (must stay > 0):
  //   BergerRound:  c/2 + n/c
  //   BergerBranch: c/2 + br_sign * sqrt(4 p (n-p) + ((2p-n)/c)^2)
  double c0 = 0.0, c1 = 0.0;
  int n = 0, p = 0;
  double br_sign = 0.0;

  double eval(double t) const;
  double deriv_bound() const;  // sup |lambda'| on [t_lo, t_hi]
  double metric_at(double t) const { return c0 + c1 * t; }
};

struct Curve {
  std::vector<CurvePiece> pieces;  // contiguous, covering [0,1]

  static Curve affine(double a, double b);
  static Curve berger_round(int n, double c_start, double c_end);
  static Curve berger_branch(int n, int p, double sign, double c_start, double c_end);

  double eval(double t) const;
  double deriv_bound(double s, double e) const;  // Lipschitz bound over [s,e]
  void validate() const;
};

struct CurveEntry {
  Curve curve;
  std::vector<WeightedCount> weights;  // total count = eigenvalue multiplicity

  int multiplicity() const { return total_count(weights); }
};

struct CurveFamily {
  std::vector<CurveEntry> curves;

  int dim() const;
};

// Parameters in family time of every zero of every curve (bisected to width
// 1e-12), with the owning curve index.
struct ZeroCrossing {
  int curve_index;
  double t;
  double value_slope_sign;  // +1 upward, -1 downward, 0 endpoint touch
};
std::vector<ZeroCrossing> find_zero_crossings(const CurveFamily& family);

// ---------------------------------------------------------------------------
// Block decomposition over circle Fourier modes. Each mode is itself a
// sampled or closed-form family; base_weight shifts every character weight of
// the mode (the base-rotation pullback convention).
struct ModeEntry {
  int label = 0;
  std::optional<SampledFamily> sampled;
  std::optional<CurveFamily> curves;
  std::vector<int> fiber_weights;  // per-dimension weights for sampled entries
  int base_weight = 0;

  int dim() const;
};

struct ModeBlockFamily {
  std::vector<ModeEntry> modes;   // unique labels, ascending
  int truncation_limit = -1;      // recorded by truncate_modes; -1 = untruncated

  int dim() const;
  void validate() const;
};

ModeBlockFamily truncate_modes(const ModeBlockFamily& family, int j_max);

// ---------------------------------------------------------------------------
struct SpectrumPoint {
  double value = 0.0;
  int multiplicity = 1;
  std::vector<WeightedCount> weights;  // empty when no label is carried
};

std::vector<SpectrumPoint> spectrum_at(const SampledFamily& f, double t);
std::vector<SpectrumPoint> spectrum_at(const CurveFamily& f, double t);
std::vector<SpectrumPoint> spectrum_at(const ModeBlockFamily& f, double t);

// Any of the three representations, for serialization and the CLI.
using FamilyRep = std::variant<SampledFamily, CurveFamily, ModeBlockFamily>;

std::vector<SpectrumPoint> spectrum_at(const FamilyRep& f, double t);
int family_dim(const FamilyRep& f);

}  // namespace specflow
