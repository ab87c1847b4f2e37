#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "specflow/eigh.hpp"
#include "specflow/generators.hpp"
#include "specflow/symmetry.hpp"

using namespace specflow;

TEST_CASE("decompose: identity and diag(1,i,i,-1)") {
  const SymmetryAction id = decompose(ComplexMatrix::identity(4));
  REQUIRE(id.characters.size() == 1);
  CHECK(std::abs(id.characters[0].value - 1.0) < 1e-14);
  CHECK(id.characters[0].multiplicity == 4);
  CHECK(id.is_identity());

  const SymmetryAction a =
      decompose(ComplexMatrix::diag({1.0, cplx(0, 1), cplx(0, 1), -1.0}));
  REQUIRE(a.characters.size() == 3);
  std::vector<int> mults;
  for (const auto& c : a.characters) mults.push_back(c.multiplicity);
  std::sort(mults.begin(), mults.end());
  CHECK(mults == std::vector<int>{1, 1, 2});
  // Angle-sorted: 1, i, -1.
  CHECK(std::abs(a.characters[0].value - 1.0) < 1e-12);
  CHECK(std::abs(a.characters[1].value - cplx(0, 1)) < 1e-12);
  CHECK(std::abs(a.characters[2].value + 1.0) < 1e-12);
}

TEST_CASE("decompose recovers a constructed eigenvalue partition") {
  Rng rng(7);
  const ComplexMatrix v = haar_unitary(rng, 6);
  const std::vector<double> thetas{0.3, 0.3, -1.2, -1.2, -1.2, 2.4};
  std::vector<cplx> d;
  for (double th : thetas) d.push_back(std::polar(1.0, th));
  const ComplexMatrix u = v * (ComplexMatrix::diag(d) * v.adjoint());
  const SymmetryAction a = decompose(u);
  REQUIRE(a.characters.size() == 3);
  std::vector<std::pair<double, int>> got;
  for (const auto& c : a.characters) got.push_back({std::arg(c.value), c.multiplicity});
  std::sort(got.begin(), got.end());
  CHECK(got[0].first == doctest::Approx(-1.2).epsilon(1e-9));
  CHECK(got[0].second == 3);
  CHECK(got[1].first == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(got[1].second == 2);
  CHECK(got[2].first == doctest::Approx(2.4).epsilon(1e-9));
  CHECK(got[2].second == 1);

  // Character projectors reconstruct U.
  ComplexMatrix recon(6, 6);
  for (const auto& c : a.characters) recon += c.projector().scaled(c.value);
  CHECK(max_abs_diff(recon, u) < 1e-9);
}

TEST_CASE("decompose rejects non-unitary and ambiguous clusters") {
  ComplexMatrix m = ComplexMatrix::identity(2).scaled(1.5);
  CHECK_THROWS_AS(decompose(m), Error);

  // Distinct eigenvalues 5e-9 apart: below the cluster tolerance but beyond
  // merge noise.
  const ComplexMatrix close =
      ComplexMatrix::diag({1.0, std::polar(1.0, 5e-9)});
  CHECK_THROWS_AS(decompose(close), Error);
}

TEST_CASE("check_commutes examples") {
  ComplexMatrix m(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  const HermitianBlock swap_block(m);
  CHECK(check_commutes(SymmetryAction::identity(2), swap_block));

  const SymmetryAction gamma = decompose(ComplexMatrix::diag({1.0, -1.0}));
  CHECK_FALSE(check_commutes(gamma, swap_block));

  const HermitianBlock diag_block(ComplexMatrix::diag_real({5.0, 7.0}));
  CHECK(check_commutes(gamma, diag_block));
}

TEST_CASE("restrict: diagonal example and spectrum splitting") {
  const SymmetryAction gamma = decompose(ComplexMatrix::diag({1.0, 1.0, -1.0}));
  const HermitianBlock m(ComplexMatrix::diag_real({5.0, 6.0, 7.0}));
  const HermitianBlock r = restrict_block(gamma, m, 1.0);
  REQUIRE(r.dim() == 2);
  const EigenSystem es = eigh(r);
  CHECK(es.values[0] == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(es.values[1] == doctest::Approx(6.0).epsilon(1e-12));

  ComplexMatrix off(3, 3);
  off(0, 2) = 1.0;
  off(2, 0) = 1.0;
  CHECK_THROWS_AS(restrict_block(gamma, HermitianBlock(off), 1.0), Error);
}

TEST_CASE("multiset of restricted spectra equals the full spectrum") {
  Rng rng(41);
  for (int rep = 0; rep < 20; ++rep) {
    const EquivariantInstance inst = random_equivariant_family(rng, [] {
      EquivariantOptions o;
      o.dim_max = 16;
      return o;
    }());
    const HermitianBlock full = inst.family.blocks[rng.uniform_int(0, 8)];
    std::vector<double> all = eigh(full).values;
    std::vector<double> stitched;
    for (const auto& c : inst.action.characters) {
      const HermitianBlock r = restrict_block(inst.action, full, c.value);
      for (double lam : eigh(r).values) stitched.push_back(lam);
    }
    REQUIRE(stitched.size() == all.size());
    std::sort(stitched.begin(), stitched.end());
    for (size_t i = 0; i < all.size(); ++i)
      CHECK(std::abs(all[i] - stitched[i]) < 1e-9);
  }
}

TEST_CASE("equivariant_trace examples and cross-checks") {
  const SymmetryAction gamma = decompose(ComplexMatrix::diag({1.0, cplx(0, 1)}));

  const EquivariantValue whole = equivariant_trace(gamma, ComplexMatrix::identity(2));
  CHECK(std::abs(whole.value - cplx(1.0, 1.0)) < 1e-12);

  const EquivariantValue none = equivariant_trace(gamma, ComplexMatrix(2, 0));
  CHECK(std::abs(none.value) == 0.0);
  CHECK(none.exact_integer.value() == 0);

  // X = E_lambda for one character: lambda * multiplicity.
  const EquivariantValue single =
      equivariant_trace(gamma, gamma.characters[1].basis);
  CHECK(std::abs(single.value - gamma.characters[1].value *
                                    static_cast<double>(gamma.characters[1].multiplicity)) <
        1e-12);

  // Identity action: dim(X) exactly.
  const SymmetryAction id = SymmetryAction::identity(2);
  const EquivariantValue d = equivariant_trace(id, ComplexMatrix::identity(2));
  CHECK(d.exact_integer.value() == 2);
  CHECK(d.value.real() == 2.0);

  // Non-invariant subspace is rejected: span{(1,1)/sqrt(2)} under diag(1,-1).
  const SymmetryAction flip = decompose(ComplexMatrix::diag({1.0, -1.0}));
  ComplexMatrix tilted(2, 1);
  tilted(0, 0) = 1.0 / std::sqrt(2.0);
  tilted(1, 0) = 1.0 / std::sqrt(2.0);
  CHECK_THROWS_AS(equivariant_trace(flip, tilted), Error);
}
