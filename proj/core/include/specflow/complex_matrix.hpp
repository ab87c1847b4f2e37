#pragma once

#include <complex>
#include <vector>

#include "specflow/errors.hpp"

namespace specflow {

using cplx = std::complex<double>;

// Dense row-major complex matrix. Sized for desk-scale spectral problems
// (dim <= a few hundred); no view/expression machinery.
class ComplexMatrix {
public:
  ComplexMatrix() : rows_(0), cols_(0) {}
  ComplexMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {
    if (rows < 0 || cols < 0) fail(ErrorKind::InvalidInput, "negative matrix size");
  }

  static ComplexMatrix identity(int n);
  static ComplexMatrix diag(const std::vector<cplx>& d);
  static ComplexMatrix diag_real(const std::vector<double>& d);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  cplx& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  const cplx& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  const std::vector<cplx>& data() const { return a_; }
  std::vector<cplx>& data() { return a_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conj() const;

  ComplexMatrix operator*(const ComplexMatrix& rhs) const;
  ComplexMatrix operator+(const ComplexMatrix& rhs) const;
  ComplexMatrix operator-(const ComplexMatrix& rhs) const;
  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix scaled(cplx s) const;

  cplx trace() const;

  // Entrywise max modulus, ||M||_max.
  double max_abs() const;
  double frobenius_norm() const;
  // Max absolute row sum; for Hermitian M this bounds the spectral norm.
  double inf_norm() const;

  ComplexMatrix column(int j) const;
  ComplexMatrix columns(const std::vector<int>& idx) const;
  void set_column(int j, const ComplexMatrix& col);

  // Horizontal concatenation [a | b].
  static ComplexMatrix hcat(const ComplexMatrix& a, const ComplexMatrix& b);
  // Block-diagonal direct sum.
  static ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b);

private:
  int rows_, cols_;
  std::vector<cplx> a_;
};

// Self-adjoint matrix with validated hermiticity (||M - M*||_max <= tol).
struct HermitianBlock {
  ComplexMatrix matrix;

  HermitianBlock() = default;
  explicit HermitianBlock(ComplexMatrix m, double hermiticity_tol = 1e-12);

  int dim() const { return matrix.rows(); }
};

// ||a - b||_max of same-shape matrices.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace specflow
