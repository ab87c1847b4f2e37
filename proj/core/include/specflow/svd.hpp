#pragma once

#include <vector>

#include "specflow/complex_matrix.hpp"

namespace specflow {

inline constexpr double kRankTol = 1e-8;
inline constexpr double kRankGapMin = 1e3;

// Singular values descending with right singular vectors (columns of v).
// One-sided Jacobi on the columns: small singular values are computed
// without forming M*M, so exact null directions come out near machine zero.
struct SingularSystem {
  std::vector<double> values;
  ComplexMatrix v;
};

SingularSystem singular_values(const ComplexMatrix& m);

struct RankDecision {
  int rank;
  // Ratio sigma_above / sigma_below across the rank_tol * sigma_max
  // threshold; +inf when one side is empty.
  double gap;
};

RankDecision rank_decision(const std::vector<double>& singular_desc, double rank_tol);

// Orthonormal columns spanning the numerical null space (sigma < rank_tol *
// sigma_max). Throws DegenerateRank when the decision gap is below
// kRankGapMin. The gap is reported through *gap_out when non-null.
ComplexMatrix kernel_basis(const ComplexMatrix& m, double rank_tol = kRankTol,
                           double* gap_out = nullptr);

}  // namespace specflow
