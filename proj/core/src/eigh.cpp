#include "specflow/eigh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace specflow {

namespace {

// One complex Jacobi rotation zeroing a_pq. The 2x2 Hermitian block
// [[app, g],[conj(g), aqq]] with g = |g| e^{i phi} is reduced to the real
// symmetric case by the phase diag(1, e^{-i phi}), then rotated by the
// classical angle with the smaller-root tangent.
struct Rotation {
  double c;     // cosine (real)
  double s;     // sine magnitude (real)
  cplx phase;   // e^{i phi}
};

Rotation make_rotation(double app, double aqq, cplx apq) {
  Rotation r;
  const double g = std::abs(apq);
  r.phase = apq / g;
  const double tau = (aqq - app) / (2.0 * g);
  double t;
  if (std::isinf(tau)) {
    t = 0.0;
  } else if (tau >= 0.0) {
    t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
  } else {
    t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
  }
  r.c = 1.0 / std::sqrt(1.0 + t * t);
  r.s = t * r.c;
  return r;
}

}  // namespace

EigenSystem eigh(const HermitianBlock& block) {
  const int n = block.dim();
  ComplexMatrix a = block.matrix;
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = std::max(a.max_abs(), 1e-300);
  const double stop = 1e-15 * scale;
  const int max_sweeps = 100;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
    if (off <= stop) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) <= stop) continue;
        const Rotation r = make_rotation(a(p, p).real(), a(q, q).real(), a(p, q));
        // U = diag(1, conj(phase)) * R on the (p,q) plane:
        //   U(:,p) = ( c, -s*conj(phase) ),  U(:,q) = ( s, c*conj(phase) ).
        const cplx upq = r.s;                       // U(p,q)
        const cplx upp = r.c;                       // U(p,p)
        const cplx uqp = -r.s * std::conj(r.phase); // U(q,p)
        const cplx uqq = r.c * std::conj(r.phase);  // U(q,q)
        // A <- U* A U: columns then rows.
        for (int i = 0; i < n; ++i) {
          const cplx aip = a(i, p), aiq = a(i, q);
          a(i, p) = aip * upp + aiq * uqp;
          a(i, q) = aip * upq + aiq * uqq;
        }
        for (int j = 0; j < n; ++j) {
          const cplx apj = a(p, j), aqj = a(q, j);
          a(p, j) = std::conj(upp) * apj + std::conj(uqp) * aqj;
          a(q, j) = std::conj(upq) * apj + std::conj(uqq) * aqj;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (int i = 0; i < n; ++i) {
          const cplx vip = v(i, p), viq = v(i, q);
          v(i, p) = vip * upp + viq * uqp;
          v(i, q) = vip * upq + viq * uqq;
        }
      }
    }
  }

  // Ascending sort, stable in the original diagonal order.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) d[i] = a(i, i).real();
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return d[x] < d[y]; });

  EigenSystem es;
  es.values.resize(n);
  es.vectors = ComplexMatrix(n, n);
  for (int k = 0; k < n; ++k) {
    es.values[k] = d[order[k]];
    // Phase convention: the largest-modulus entry is made real positive.
    int imax = 0;
    double amax = -1.0;
    for (int i = 0; i < n; ++i) {
      const double m = std::abs(v(i, order[k]));
      if (m > amax) {
        amax = m;
        imax = i;
      }
    }
    cplx ph = v(imax, order[k]);
    ph = (std::abs(ph) > 0.0) ? std::conj(ph) / std::abs(ph) : cplx(1.0, 0.0);
    for (int i = 0; i < n; ++i) es.vectors(i, k) = v(i, order[k]) * ph;
  }
  return es;
}

ComplexMatrix eigen_reconstruct(const EigenSystem& es) {
  const int n = es.vectors.rows();
  ComplexMatrix vd = es.vectors;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) vd(i, j) *= es.values[j];
  return vd * es.vectors.adjoint();
}

namespace {

std::vector<int> interval_indices(const EigenSystem& es, double lo, double hi,
                                  double collision_tol) {
  double vmax = 1.0;
  for (double lam : es.values) vmax = std::max(vmax, std::abs(lam));
  const double guard = collision_tol * vmax;
  for (double lam : es.values) {
    if (std::abs(lam - lo) < guard || std::abs(lam - hi) < guard) {
      fail(ErrorKind::SpectralBoundaryCollision,
           "interval endpoint within tolerance of an eigenvalue; refine the window");
    }
  }
  std::vector<int> idx;
  for (int i = 0; i < static_cast<int>(es.values.size()); ++i)
    if (es.values[i] >= lo && es.values[i] <= hi) idx.push_back(i);
  return idx;
}

}  // namespace

ComplexMatrix spectral_projector(const HermitianBlock& block, double lo, double hi,
                                 double eig_collision_tol) {
  const EigenSystem es = eigh(block);
  const std::vector<int> idx = interval_indices(es, lo, hi, eig_collision_tol);
  const int n = block.dim();
  ComplexMatrix p(n, n);
  for (int k : idx) {
    for (int i = 0; i < n; ++i) {
      const cplx vi = es.vectors(i, k);
      for (int j = 0; j < n; ++j) p(i, j) += vi * std::conj(es.vectors(j, k));
    }
  }
  return p;
}

ComplexMatrix spectral_subspace_basis(const HermitianBlock& block, double lo, double hi,
                                      double eig_collision_tol) {
  const EigenSystem es = eigh(block);
  const std::vector<int> idx = interval_indices(es, lo, hi, eig_collision_tol);
  return es.vectors.columns(idx);
}

ComplexMatrix hermitian_function(const EigenSystem& es, double (*f)(double)) {
  const int n = es.vectors.rows();
  ComplexMatrix vd = es.vectors;
  for (int j = 0; j < n; ++j) {
    const double fj = f(es.values[j]);
    for (int i = 0; i < n; ++i) vd(i, j) *= fj;
  }
  return vd * es.vectors.adjoint();
}

ComplexMatrix hermitian_unitary_exp(const EigenSystem& es, double s) {
  const int n = es.vectors.rows();
  ComplexMatrix vd = es.vectors;
  for (int j = 0; j < n; ++j) {
    const cplx ph = std::polar(1.0, s * es.values[j]);
    for (int i = 0; i < n; ++i) vd(i, j) *= ph;
  }
  return vd * es.vectors.adjoint();
}

ComplexMatrix hermitian_real_exp(const EigenSystem& es, double s) {
  const int n = es.vectors.rows();
  ComplexMatrix vd = es.vectors;
  for (int j = 0; j < n; ++j) {
    const double e = std::exp(s * es.values[j]);
    for (int i = 0; i < n; ++i) vd(i, j) *= e;
  }
  return vd * es.vectors.adjoint();
}

ComplexMatrix hermitian_power(const EigenSystem& es, double p) {
  const int n = es.vectors.rows();
  for (double lam : es.values)
    if (lam <= 0.0) fail(ErrorKind::InvalidInput, "hermitian_power needs a positive spectrum");
  ComplexMatrix vd = es.vectors;
  for (int j = 0; j < n; ++j) {
    const double e = std::pow(es.values[j], p);
    for (int i = 0; i < n; ++i) vd(i, j) *= e;
  }
  return vd * es.vectors.adjoint();
}

}  // namespace specflow
