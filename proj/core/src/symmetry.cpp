#include "specflow/symmetry.hpp"

#include <algorithm>
#include <cmath>

#include "specflow/eigh.hpp"

namespace specflow {

namespace {

constexpr double kUnitaryTol = 1e-10;
constexpr double kMergeTol = 1e-10;  // numerical-noise merge radius

std::vector<std::pair<int, int>> cluster_ranges(const std::vector<double>& sorted_vals,
                                                double tol) {
  std::vector<std::pair<int, int>> ranges;
  const int n = static_cast<int>(sorted_vals.size());
  int start = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == n || sorted_vals[i] - sorted_vals[i - 1] > tol) {
      ranges.emplace_back(start, i);
      start = i;
    }
  }
  return ranges;
}

}  // namespace

bool SymmetryAction::is_identity() const {
  return max_abs_diff(unitary, ComplexMatrix::identity(dim)) <= 1e-12;
}

SymmetryAction SymmetryAction::identity(int dim, const std::string& label) {
  SymmetryAction a;
  a.label = label;
  a.dim = dim;
  a.unitary = ComplexMatrix::identity(dim);
  Character c;
  c.value = 1.0;
  c.basis = ComplexMatrix::identity(dim);
  c.multiplicity = dim;
  a.characters.push_back(std::move(c));
  return a;
}

SymmetryAction decompose(const ComplexMatrix& u, const std::string& label, double cluster_tol) {
  const int n = u.rows();
  if (n != u.cols()) fail(ErrorKind::InvalidInput, "symmetry must be square");
  if (max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(n)) > kUnitaryTol)
    fail(ErrorKind::InvalidInput, "symmetry matrix is not unitary within tolerance");

  // U is normal, so Re(U) and Im(U) are commuting Hermitian matrices; joint
  // eigenspaces are found by refining the eigenspaces of Re(U) with Im(U).
  const ComplexMatrix ua = u.adjoint();
  const HermitianBlock h((u + ua).scaled(0.5), 1e-9);
  const HermitianBlock k((u - ua).scaled(cplx(0.0, -0.5)), 1e-9);

  const EigenSystem hs = eigh(h);
  std::vector<Character> chars;
  for (const auto& [lo, hi] : cluster_ranges(hs.values, kMergeTol)) {
    std::vector<int> idx;
    for (int i = lo; i < hi; ++i) idx.push_back(i);
    const ComplexMatrix w = hs.vectors.columns(idx);
    const HermitianBlock kc(w.adjoint() * (k.matrix * w), 1e-8);
    const EigenSystem ks = eigh(kc);
    const ComplexMatrix wy = w * ks.vectors;
    const double hval = hs.values[lo];
    for (const auto& [klo, khi] : cluster_ranges(ks.values, kMergeTol)) {
      std::vector<int> sub;
      for (int i = klo; i < khi; ++i) sub.push_back(i);
      Character c;
      const cplx raw(hval, ks.values[klo]);
      c.value = raw / std::abs(raw);
      c.basis = wy.columns(sub);
      c.multiplicity = static_cast<int>(sub.size());
      chars.push_back(std::move(c));
    }
  }

  std::stable_sort(chars.begin(), chars.end(), [](const Character& a, const Character& b) {
    return std::arg(a.value) < std::arg(b.value);
  });

  for (size_t i = 0; i < chars.size(); ++i) {
    for (size_t j = i + 1; j < chars.size(); ++j) {
      if (std::abs(chars[i].value - chars[j].value) <= cluster_tol)
        fail(ErrorKind::ClusterAmbiguity,
             "distinct symmetry eigenvalues closer than the cluster tolerance");
    }
  }

  SymmetryAction action;
  action.label = label;
  action.dim = n;
  action.unitary = u;
  action.characters = std::move(chars);

  int total = 0;
  ComplexMatrix recon(n, n);
  for (const auto& c : action.characters) {
    total += c.multiplicity;
    recon += c.projector().scaled(c.value);
  }
  if (total != n)
    fail(ErrorKind::InternalInconsistency, "character multiplicities do not sum to dim");
  if (max_abs_diff(recon, u) > 1e-8)
    fail(ErrorKind::InternalInconsistency, "character projectors fail to reconstruct the unitary");
  return action;
}

bool check_commutes(const SymmetryAction& action, const HermitianBlock& block,
                    double commute_tol) {
  if (action.dim != block.dim()) fail(ErrorKind::InvalidInput, "dimension mismatch");
  const ComplexMatrix comm = action.unitary * block.matrix - block.matrix * action.unitary;
  const double scale = std::max(1.0, block.matrix.frobenius_norm());
  return comm.max_abs() <= commute_tol * scale;
}

HermitianBlock restrict_block(const SymmetryAction& action, const HermitianBlock& block,
                              cplx character) {
  if (!check_commutes(action, block))
    fail(ErrorKind::NotEquivariant, "operator does not commute with the symmetry");
  const Character* found = nullptr;
  for (const auto& c : action.characters) {
    if (std::abs(c.value - character) <= kCharClusterTol) {
      found = &c;
      break;
    }
  }
  if (!found) fail(ErrorKind::InvalidInput, "character is not in the symmetry's spectrum");
  return HermitianBlock(found->basis.adjoint() * (block.matrix * found->basis), 1e-9);
}

EquivariantValue equivariant_trace(const SymmetryAction& action,
                                   const ComplexMatrix& subspace_basis, double inv_tol) {
  const int dim = action.dim;
  const int k = subspace_basis.cols();
  EquivariantValue out;
  out.gamma_id = action.label;
  if (k == 0) {
    out.value = 0.0;
    out.exact_integer = 0;
    return out;
  }
  if (subspace_basis.rows() != dim) fail(ErrorKind::InvalidInput, "basis dimension mismatch");
  if (max_abs_diff(subspace_basis.adjoint() * subspace_basis, ComplexMatrix::identity(k)) > 1e-8)
    fail(ErrorKind::InvalidInput, "subspace basis is not orthonormal");

  const ComplexMatrix ub = action.unitary * subspace_basis;
  const ComplexMatrix residual = ub - subspace_basis * (subspace_basis.adjoint() * ub);
  if (residual.max_abs() > inv_tol)
    fail(ErrorKind::NotInvariant, "subspace is not invariant under the symmetry");

  if (action.is_identity()) {
    out.value = static_cast<double>(k);
    out.exact_integer = k;
    return out;
  }

  const cplx direct = (subspace_basis.adjoint() * ub).trace();

  // Character-sum route: tr = sum_lambda lambda * dim(E_lambda ^ X).
  cplx char_sum = 0.0;
  int dims_total = 0;
  for (const auto& c : action.characters) {
    const ComplexMatrix pb = c.basis.adjoint() * subspace_basis;
    const double d = (pb.adjoint() * pb).trace().real();
    const double rounded = std::round(d);
    if (std::abs(d - rounded) > 1e-6)
      fail(ErrorKind::NotInvariant,
           "subspace does not split integrally over the character eigenspaces");
    char_sum += c.value * rounded;
    dims_total += static_cast<int>(rounded);
  }
  if (dims_total != k)
    fail(ErrorKind::InternalInconsistency, "character dimensions do not add up to dim(X)");
  if (std::abs(direct - char_sum) > 1e-8)
    fail(ErrorKind::InternalInconsistency,
         "direct trace and character sum disagree beyond tolerance");

  out.value = direct;
  return out;
}

}  // namespace specflow
