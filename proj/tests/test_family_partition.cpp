#include <doctest.h>

#include <cmath>

#include "specflow/eigh.hpp"
#include "specflow/generators.hpp"
#include "specflow/partition.hpp"

using namespace specflow;

namespace {

SampledFamily constant_family(std::vector<double> eigvals) {
  const HermitianBlock b(ComplexMatrix::diag_real(eigvals));
  return SampledFamily({0.0, 1.0}, {b, b}, 0.0);
}

}  // namespace

TEST_CASE("sampled family invariants") {
  const HermitianBlock b(ComplexMatrix::diag_real({1.0, -1.0}));
  CHECK_THROWS_AS(SampledFamily({0.0, 0.5}, {b, b}, 0.0), Error);  // misses t=1
  CHECK_THROWS_AS(SampledFamily({0.0, 0.0, 1.0}, {b, b, b}, 0.0), Error);

  // Lipschitz violation: a jump of norm 2 over dt=1 with bound 1.
  const HermitianBlock b2(ComplexMatrix::diag_real({3.0, 1.0}));
  CHECK_THROWS_AS(SampledFamily({0.0, 1.0}, {b, b2}, 1.0), Error);
  CHECK_NOTHROW(SampledFamily({0.0, 1.0}, {b, b2}, 2.0));
}

TEST_CASE("spectrum_at a sample time equals eigh of that sample exactly") {
  Rng rng(2);
  const EquivariantInstance inst = random_equivariant_family(rng);
  const auto spec = spectrum_at(inst.family, inst.family.times[3]);
  const EigenSystem es = eigh(inst.family.blocks[3]);
  REQUIRE(spec.size() == es.values.size());
  for (size_t i = 0; i < spec.size(); ++i) CHECK(spec[i].value == es.values[i]);
}

TEST_CASE("constant invertible family: one segment, half-gap window") {
  const SampledFamily f = constant_family({-3.0, -1.0, 1.0, 3.0});
  const FlowPartition p = build_flow_partition(f);
  CHECK(p.segments() == 1);
  CHECK(p.radii[0] == doctest::Approx(0.5));  // gap (-1,1), radius g/2
  CHECK(p.margins[0] >= 0.4);
}

TEST_CASE("scalar curve t - 1/2: windows avoid the crossing") {
  CurveFamily f;
  f.curves.push_back({Curve::affine(-0.5, 1.0), {{0, 1}}});
  const FlowPartition p = build_flow_partition(f);
  CHECK(p.segments() >= 2);
  CHECK(verify_partition_dense(FamilyRep(f), p));
}

TEST_CASE("circle mode j=-1: final window keeps the arriving zero interior") {
  CurveFamily f;
  f.curves.push_back({Curve::affine(-1.0, 1.0), {{1, 1}}});
  const FlowPartition p = build_flow_partition(f);
  CHECK(verify_partition_dense(FamilyRep(f), p));
  // Value 0 at t=1 lies strictly inside the last window.
  CHECK(p.radii.back() > 0.0);
  CHECK(f.curves[0].curve.eval(1.0) == 0.0);
}

TEST_CASE("partition validity for random sampled families (dense recheck)") {
  Rng rng(19);
  for (int rep = 0; rep < 10; ++rep) {
    const EquivariantInstance inst = random_equivariant_family(rng);
    const FlowPartition p = build_flow_partition(inst.family);
    CHECK(verify_partition_dense(FamilyRep(inst.family), p, 100));
    CHECK_NOTHROW(require_certified(inst.family, p));
  }
}

TEST_CASE("alternative windows are admissible too") {
  Rng rng(29);
  const EquivariantInstance inst = random_equivariant_family(rng);
  PartitionOptions opts;
  opts.alternative_windows = true;
  const FlowPartition p = build_flow_partition(inst.family, opts);
  CHECK(verify_partition_dense(FamilyRep(inst.family), p, 100));
}

TEST_CASE("certificates are family-specific") {
  const SampledFamily f = constant_family({-1.0, 1.0});
  const FlowPartition p = build_flow_partition(f);
  const SampledFamily g = constant_family({-0.5, 0.5});
  CHECK_THROWS_AS(require_certified(g, p), Error);
}

TEST_CASE("truncate_modes") {
  ModeBlockFamily fam;
  for (int j = -5; j <= 5; ++j) {
    ModeEntry e;
    e.label = j;
    CurveFamily cf;
    cf.curves.push_back({Curve::affine(static_cast<double>(j), 1.0), {{1, 1}}});
    e.curves = cf;
    fam.modes.push_back(std::move(e));
  }
  const ModeBlockFamily t3 = truncate_modes(fam, 3);
  CHECK(t3.modes.size() == 7);
  CHECK(t3.truncation_limit == 3);
  const ModeBlockFamily t9 = truncate_modes(fam, 9);
  CHECK(t9.modes.size() == fam.modes.size());
}

TEST_CASE("berger branch curve evaluates its closed form exactly at the crossing") {
  const Curve c = Curve::berger_branch(2, 1, -1.0, 1.0, 5.0);
  CHECK(c.eval(0.75) == 0.0);  // c(t)=4, value 4/2 - sqrt(4) = 0
  CHECK(c.eval(0.0) == doctest::Approx(0.5 - std::sqrt(4.0 + 0.0)).epsilon(1e-15));
}

TEST_CASE("zero crossings are isolated by bisection") {
  CurveFamily f;
  f.curves.push_back({Curve::affine(-0.25, 1.0), {{0, 1}}});           // zero at 0.25
  f.curves.push_back({Curve::berger_branch(2, 1, -1.0, 1.0, 5.0), {{0, 1}}});  // zero at 0.75
  const auto xs = find_zero_crossings(f);
  REQUIRE(xs.size() == 2);
  CHECK(std::abs(xs[0].t - 0.25) < 1e-11);
  CHECK(xs[0].value_slope_sign == 1.0);
  CHECK(std::abs(xs[1].t - 0.75) < 1e-11);
}
