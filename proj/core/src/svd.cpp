#include "specflow/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace specflow {

SingularSystem singular_values(const ComplexMatrix& m) {
  const int rows = m.rows(), cols = m.cols();
  ComplexMatrix a = m;
  ComplexMatrix v = ComplexMatrix::identity(cols);

  // Sweep column pairs until all are numerically orthogonal.
  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < cols; ++p) {
      for (int q = p + 1; q < cols; ++q) {
        double app = 0.0, aqq = 0.0;
        cplx apq = 0.0;
        for (int i = 0; i < rows; ++i) {
          app += std::norm(a(i, p));
          aqq += std::norm(a(i, q));
          apq += std::conj(a(i, p)) * a(i, q);
        }
        const double g = std::abs(apq);
        if (g <= 1e-16 * std::sqrt(app * aqq) || g == 0.0) continue;
        rotated = true;
        const cplx phase = apq / g;
        const double tau = (aqq - app) / (2.0 * g);
        double t;
        if (tau >= 0.0) {
          t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
        } else {
          t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // Right rotation U on the (p,q) plane, same construction as in eigh:
        // it diagonalizes the 2x2 Gram block, i.e. orthogonalizes the columns.
        const cplx upp = c, upq = s;
        const cplx uqp = -s * std::conj(phase), uqq = c * std::conj(phase);
        for (int i = 0; i < rows; ++i) {
          const cplx aip = a(i, p), aiq = a(i, q);
          a(i, p) = aip * upp + aiq * uqp;
          a(i, q) = aip * upq + aiq * uqq;
        }
        for (int i = 0; i < cols; ++i) {
          const cplx vip = v(i, p), viq = v(i, q);
          v(i, p) = vip * upp + viq * uqp;
          v(i, q) = vip * upq + viq * uqq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(cols);
  for (int j = 0; j < cols; ++j) {
    double s = 0.0;
    for (int i = 0; i < rows; ++i) s += std::norm(a(i, j));
    sigma[j] = std::sqrt(s);
  }

  std::vector<int> order(cols);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return sigma[x] > sigma[y]; });

  SingularSystem out;
  out.values.resize(cols);
  out.v = ComplexMatrix(cols, cols);
  for (int k = 0; k < cols; ++k) {
    out.values[k] = sigma[order[k]];
    int imax = 0;
    double amax = -1.0;
    for (int i = 0; i < cols; ++i) {
      const double mm = std::abs(v(i, order[k]));
      if (mm > amax) {
        amax = mm;
        imax = i;
      }
    }
    cplx ph = v(imax, order[k]);
    ph = (std::abs(ph) > 0.0) ? std::conj(ph) / std::abs(ph) : cplx(1.0, 0.0);
    for (int i = 0; i < cols; ++i) out.v(i, k) = v(i, order[k]) * ph;
  }
  return out;
}

RankDecision rank_decision(const std::vector<double>& s, double rank_tol) {
  RankDecision d{0, std::numeric_limits<double>::infinity()};
  if (s.empty()) return d;
  const double smax = s.front();
  if (smax == 0.0) {
    d.rank = 0;
    return d;
  }
  const double thr = rank_tol * smax;
  int r = 0;
  while (r < static_cast<int>(s.size()) && s[r] >= thr) ++r;
  d.rank = r;
  // Separation of the decision: ratio across the threshold when both sides
  // are populated, otherwise the distance of the nearest singular value from
  // the threshold itself.
  const bool have_above = r > 0;
  const bool have_below = r < static_cast<int>(s.size());
  if (have_above && have_below) {
    const double below = s[r];
    d.gap = (below == 0.0) ? std::numeric_limits<double>::infinity() : s[r - 1] / below;
  } else if (have_above) {
    d.gap = s[r - 1] / thr;
  } else if (have_below && s[r] > 0.0) {
    d.gap = thr / s[r];
  }
  return d;
}

ComplexMatrix kernel_basis(const ComplexMatrix& m, double rank_tol, double* gap_out) {
  if (rank_tol <= 0.0) fail(ErrorKind::InvalidInput, "rank_tol must be positive");
  if (m.cols() == 0) {
    if (gap_out) *gap_out = std::numeric_limits<double>::infinity();
    return ComplexMatrix(m.rows() == 0 ? 0 : m.cols(), 0);
  }
  const SingularSystem ss = singular_values(m);
  const RankDecision d = rank_decision(ss.values, rank_tol);
  if (gap_out) *gap_out = d.gap;
  if (d.gap < kRankGapMin)
    fail(ErrorKind::DegenerateRank, "rank decision not separated by the required gap ratio");
  std::vector<int> idx;
  for (int k = d.rank; k < m.cols(); ++k) idx.push_back(k);
  return ss.v.columns(idx);
}

}  // namespace specflow
