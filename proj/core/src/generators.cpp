#include "specflow/generators.hpp"

#include <algorithm>
#include <cmath>

#include "specflow/eigh.hpp"

namespace specflow {

uint64_t Rng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int Rng::uniform_int(int lo, int hi) {
  return lo + static_cast<int>(next_u64() % static_cast<uint64_t>(hi - lo + 1));
}

double Rng::normal() {
  const double u1 = std::max(uniform(), 1e-300);
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

cplx Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return cplx(re, im) / std::sqrt(2.0);
}

namespace {

double spectral_norm(const ComplexMatrix& h) {
  const EigenSystem es = eigh(HermitianBlock(h, 1e-8));
  double m = 0.0;
  for (double lam : es.values) m = std::max(m, std::abs(lam));
  return m;
}

ComplexMatrix scaled_to_norm(ComplexMatrix h, double target) {
  const double nrm = spectral_norm(h);
  if (nrm > 1e-12) h = h.scaled(target / nrm);
  return h;
}

// Smooth Hermitian path A0 + t A1 + sin(pi t) A2 on one character block.
struct BlockPath {
  ComplexMatrix a0, a1, a2;
  bool signed_square = false;  // use sign * (C(t)^2 + delta) instead
  double sign = 1.0;
  double delta = 0.0;

  ComplexMatrix raw(double t) const {
    return a0 + a1.scaled(t) + a2.scaled(std::sin(M_PI * t));
  }
  ComplexMatrix at(double t) const {
    if (!signed_square) return raw(t);
    const ComplexMatrix c = raw(t);
    ComplexMatrix sq = c * c;
    for (int i = 0; i < sq.rows(); ++i) sq(i, i) += delta;
    return sq.scaled(sign);
  }
  double lipschitz() const {
    const double l_raw = spectral_norm(a1) + M_PI * spectral_norm(a2);
    if (!signed_square) return l_raw;
    const double m = spectral_norm(a0) + spectral_norm(a1) + spectral_norm(a2);
    return 2.0 * m * l_raw;
  }
};

}  // namespace

ComplexMatrix random_hermitian(Rng& rng, int dim, double norm_bound) {
  ComplexMatrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = rng.complex_normal();
  return scaled_to_norm((g + g.adjoint()).scaled(0.5), norm_bound);
}

ComplexMatrix haar_unitary(Rng& rng, int dim) {
  ComplexMatrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = rng.complex_normal();
  ComplexMatrix q(dim, dim);
  for (int j = 0; j < dim; ++j) {
    std::vector<cplx> col(dim);
    for (int i = 0; i < dim; ++i) col[i] = g(i, j);
    for (int pass = 0; pass < 2; ++pass) {
      for (int k = 0; k < j; ++k) {
        cplx proj = 0.0;
        for (int i = 0; i < dim; ++i) proj += std::conj(q(i, k)) * col[i];
        for (int i = 0; i < dim; ++i) col[i] -= proj * q(i, k);
      }
    }
    double nrm = 0.0;
    for (int i = 0; i < dim; ++i) nrm += std::norm(col[i]);
    nrm = std::sqrt(nrm);
    cplx phase(1.0, 0.0);
    for (int i = 0; i < dim; ++i)
      if (std::abs(col[i]) > 1e-12 * nrm) {
        phase = col[i] / std::abs(col[i]);
        break;
      }
    for (int i = 0; i < dim; ++i) q(i, j) = col[i] / (nrm * phase);
  }
  return q;
}

EquivariantInstance random_equivariant_family(Rng& rng, const EquivariantOptions& opts) {
  for (int attempt = 0; attempt < 400; ++attempt) {
    const int dim = rng.uniform_int(opts.dim_min, opts.dim_max);
    const int nchar = rng.uniform_int(1, std::min(3, dim));

    std::vector<int> mults(nchar, 1);
    for (int extra = dim - nchar; extra > 0; --extra) ++mults[rng.uniform_int(0, nchar - 1)];

    // Character angles at least 0.4 apart on the circle.
    std::vector<double> angles;
    bool ok = true;
    for (int c = 0; c < nchar; ++c) {
      const double th = rng.uniform(-M_PI, M_PI);
      for (double other : angles)
        if (std::abs(std::remainder(th - other, 2.0 * M_PI)) < 0.4) ok = false;
      angles.push_back(th);
    }
    if (!ok) continue;

    const double part = opts.norm_bound / 3.0;
    std::vector<BlockPath> paths;
    double lipschitz = 0.0;
    for (int c = 0; c < nchar; ++c) {
      BlockPath bp;
      if (opts.invertible_path) {
        const double root = std::sqrt(part);
        bp.a0 = random_hermitian(rng, mults[c], root);
        bp.a1 = random_hermitian(rng, mults[c], root * 0.3);
        bp.a2 = random_hermitian(rng, mults[c], root * 0.3);
        bp.signed_square = true;
        bp.sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        bp.delta = rng.uniform(0.3, 0.8);
      } else {
        bp.a0 = random_hermitian(rng, mults[c], part * rng.uniform(0.5, 1.0));
        bp.a1 = random_hermitian(rng, mults[c], part * rng.uniform(0.3, 1.0));
        bp.a2 = random_hermitian(rng, mults[c], part * rng.uniform(0.3, 1.0));
      }
      lipschitz = std::max(lipschitz, bp.lipschitz());
      paths.push_back(std::move(bp));
    }

    const ComplexMatrix v = haar_unitary(rng, dim);

    std::vector<cplx> udiag;
    for (int c = 0; c < nchar; ++c)
      for (int m = 0; m < mults[c]; ++m) udiag.push_back(std::polar(1.0, angles[c]));
    const ComplexMatrix u = v * (ComplexMatrix::diag(udiag) * v.adjoint());

    auto block_at = [&](double t) {
      ComplexMatrix d(dim, dim);
      int off = 0;
      for (int c = 0; c < nchar; ++c) {
        const ComplexMatrix b = paths[c].at(t);
        for (int i = 0; i < mults[c]; ++i)
          for (int j = 0; j < mults[c]; ++j) d(off + i, off + j) = b(i, j);
        off += mults[c];
      }
      return v * (d * v.adjoint());
    };

    std::vector<double> times;
    std::vector<HermitianBlock> blocks;
    for (int i = 0; i < opts.samples; ++i) {
      times.push_back(i == opts.samples - 1 ? 1.0 : static_cast<double>(i) / (opts.samples - 1));
      blocks.emplace_back(block_at(times.back()), 1e-9);
    }

    bool endpoint_ok = true;
    for (const HermitianBlock* b : {&blocks.front(), &blocks.back()}) {
      for (double lam : eigh(*b).values)
        if (std::abs(lam) < opts.endpoint_gap * opts.norm_bound) endpoint_ok = false;
    }
    if (!endpoint_ok) continue;

    return EquivariantInstance{SampledFamily(std::move(times), std::move(blocks), lipschitz),
                               decompose(u)};
  }
  fail(ErrorKind::InvalidInput, "could not draw an equivariant instance within the budget");
}

SampledFamily random_congruence_weights(Rng& rng, int dim, int samples) {
  const ComplexMatrix h = random_hermitian(rng, dim, rng.uniform(0.3, 1.2));
  const EigenSystem hs = eigh(HermitianBlock(h, 1e-9));
  std::vector<double> times;
  std::vector<HermitianBlock> blocks;
  for (int i = 0; i < samples; ++i) {
    const double t = (i == samples - 1) ? 1.0 : static_cast<double>(i) / (samples - 1);
    times.push_back(t);
    // N(t) = exp(sin(pi t) H): positive definite, exactly I at the endpoints.
    if (i == 0 || i == samples - 1) {
      blocks.emplace_back(ComplexMatrix::identity(dim), 1e-9);
    } else {
      blocks.emplace_back(hermitian_real_exp(hs, std::sin(M_PI * t)), 1e-9);
    }
  }
  double lip = 0.0;
  for (size_t i = 0; i + 1 < times.size(); ++i) {
    const EigenSystem es = eigh(HermitianBlock(blocks[i + 1].matrix - blocks[i].matrix, 1e-8));
    double nrm = 0.0;
    for (double lam : es.values) nrm = std::max(nrm, std::abs(lam));
    lip = std::max(lip, nrm / (times[i + 1] - times[i]));
  }
  return SampledFamily(std::move(times), std::move(blocks), lip);
}

}  // namespace specflow
