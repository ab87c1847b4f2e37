#include "specflow/complex_matrix.hpp"

#include <algorithm>
#include <cmath>

namespace specflow {

ComplexMatrix ComplexMatrix::identity(int n) {
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diag(const std::vector<cplx>& d) {
  ComplexMatrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::diag_real(const std::vector<double>& d) {
  ComplexMatrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix m(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

ComplexMatrix ComplexMatrix::conj() const {
  ComplexMatrix m(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(i, j) = std::conj((*this)(i, j));
  return m;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& rhs) const {
  if (cols_ != rhs.rows_) fail(ErrorKind::InvalidInput, "matrix product shape mismatch");
  ComplexMatrix out(rows_, rhs.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int k = 0; k < cols_; ++k) {
      const cplx aik = (*this)(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < rhs.cols_; ++j) out(i, j) += aik * rhs(k, j);
    }
  }
  return out;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& rhs) const {
  ComplexMatrix out = *this;
  out += rhs;
  return out;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& rhs) const {
  ComplexMatrix out = *this;
  out -= rhs;
  return out;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    fail(ErrorKind::InvalidInput, "matrix sum shape mismatch");
  for (size_t i = 0; i < a_.size(); ++i) a_[i] += rhs.a_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    fail(ErrorKind::InvalidInput, "matrix difference shape mismatch");
  for (size_t i = 0; i < a_.size(); ++i) a_[i] -= rhs.a_[i];
  return *this;
}

ComplexMatrix ComplexMatrix::scaled(cplx s) const {
  ComplexMatrix out = *this;
  for (auto& v : out.a_) v *= s;
  return out;
}

cplx ComplexMatrix::trace() const {
  cplx t = 0.0;
  const int n = std::min(rows_, cols_);
  for (int i = 0; i < n; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& v : a_) m = std::max(m, std::abs(v));
  return m;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& v : a_) s += std::norm(v);
  return std::sqrt(s);
}

double ComplexMatrix::inf_norm() const {
  double m = 0.0;
  for (int i = 0; i < rows_; ++i) {
    double row = 0.0;
    for (int j = 0; j < cols_; ++j) row += std::abs((*this)(i, j));
    m = std::max(m, row);
  }
  return m;
}

ComplexMatrix ComplexMatrix::column(int j) const {
  ComplexMatrix c(rows_, 1);
  for (int i = 0; i < rows_; ++i) c(i, 0) = (*this)(i, j);
  return c;
}

ComplexMatrix ComplexMatrix::columns(const std::vector<int>& idx) const {
  ComplexMatrix c(rows_, static_cast<int>(idx.size()));
  for (size_t k = 0; k < idx.size(); ++k)
    for (int i = 0; i < rows_; ++i) c(i, static_cast<int>(k)) = (*this)(i, idx[k]);
  return c;
}

void ComplexMatrix::set_column(int j, const ComplexMatrix& col) {
  for (int i = 0; i < rows_; ++i) (*this)(i, j) = col(i, 0);
}

ComplexMatrix ComplexMatrix::hcat(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (a.rows_ != b.rows_) fail(ErrorKind::InvalidInput, "hcat row mismatch");
  ComplexMatrix out(a.rows_, a.cols_ + b.cols_);
  for (int i = 0; i < a.rows_; ++i) {
    for (int j = 0; j < a.cols_; ++j) out(i, j) = a(i, j);
    for (int j = 0; j < b.cols_; ++j) out(i, a.cols_ + j) = b(i, j);
  }
  return out;
}

ComplexMatrix ComplexMatrix::direct_sum(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows_ + b.rows_, a.cols_ + b.cols_);
  for (int i = 0; i < a.rows_; ++i)
    for (int j = 0; j < a.cols_; ++j) out(i, j) = a(i, j);
  for (int i = 0; i < b.rows_; ++i)
    for (int j = 0; j < b.cols_; ++j) out(a.rows_ + i, a.cols_ + j) = b(i, j);
  return out;
}

HermitianBlock::HermitianBlock(ComplexMatrix m, double hermiticity_tol) : matrix(std::move(m)) {
  if (matrix.rows() != matrix.cols())
    fail(ErrorKind::InvalidInput, "Hermitian block must be square");
  double dev = 0.0;
  for (int i = 0; i < matrix.rows(); ++i)
    for (int j = i; j < matrix.cols(); ++j)
      dev = std::max(dev, std::abs(matrix(i, j) - std::conj(matrix(j, i))));
  const double scale = std::max(1.0, matrix.max_abs());
  if (dev > hermiticity_tol * scale)
    fail(ErrorKind::InvalidInput, "matrix is not Hermitian within tolerance");
  // Symmetrize so downstream arithmetic sees an exactly self-adjoint matrix.
  for (int i = 0; i < matrix.rows(); ++i) {
    matrix(i, i) = matrix(i, i).real();
    for (int j = i + 1; j < matrix.cols(); ++j) {
      const cplx v = 0.5 * (matrix(i, j) + std::conj(matrix(j, i)));
      matrix(i, j) = v;
      matrix(j, i) = std::conj(v);
    }
  }
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail(ErrorKind::InvalidInput, "max_abs_diff shape mismatch");
  double m = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

}  // namespace specflow
