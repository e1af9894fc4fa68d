#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "scalar.hpp"

namespace lrswap {

/// Row-major dense matrix over a scalar ring. Used where coefficients are not
/// 0/1 and as the independent oracle for blockwise constructions.
template <class S>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, S(0)) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = S(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  S& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const S& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    require(a.cols_ == b.rows_, ErrorKind::InvalidParameter, "dense product shape mismatch");
    DenseMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const S& aik = a(i, k);
        if (is_zero(aik)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) {
    require(a.rows_ == b.rows_ && a.cols_ == b.cols_, ErrorKind::InvalidParameter, "dense sum shape mismatch");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }

  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) {
    require(a.rows_ == b.rows_ && a.cols_ == b.cols_, ErrorKind::InvalidParameter, "dense difference shape mismatch");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }

  friend DenseMatrix operator*(const S& s, DenseMatrix a) {
    for (auto& x : a.data_) x *= s;
    return a;
  }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  bool is_zero_matrix() const {
    for (const auto& x : data_)
      if (!is_zero(x)) return false;
    return true;
  }

  double max_abs_diff(const DenseMatrix& other) const {
    require(rows_ == other.rows_ && cols_ == other.cols_, ErrorKind::InvalidParameter, "shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i) {
      double d = magnitude(S(data_[i] - other.data_[i]));
      if (d > m) m = d;
    }
    return m;
  }

  /// Gauss-Jordan inverse with largest-magnitude pivoting.
  DenseMatrix inverse() const {
    require(rows_ == cols_, ErrorKind::InvalidParameter, "inverse of a non-square matrix");
    const std::size_t n = rows_;
    DenseMatrix a = *this;
    DenseMatrix inv = identity(n);
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t pivot = n;
      double best = -1.0;
      for (std::size_t r = col; r < n; ++r) {
        if (is_zero(a(r, col))) continue;
        double m = magnitude(a(r, col));
        if (m > best) {
          best = m;
          pivot = r;
        }
      }
      require(pivot != n, ErrorKind::Singularity, "matrix is singular (column " + std::to_string(col) + ")");
      if (pivot != col)
        for (std::size_t c = 0; c < n; ++c) {
          std::swap(a(pivot, c), a(col, c));
          std::swap(inv(pivot, c), inv(col, c));
        }
      const S p = a(col, col);
      for (std::size_t c = 0; c < n; ++c) {
        a(col, c) /= p;
        inv(col, c) /= p;
      }
      for (std::size_t r = 0; r < n; ++r) {
        if (r == col || is_zero(a(r, col))) continue;
        const S f = a(r, col);
        for (std::size_t c = 0; c < n; ++c) {
          a(r, c) -= f * a(col, c);
          inv(r, c) -= f * inv(col, c);
        }
      }
    }
    return inv;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<S> data_;
};

template <class S>
DenseMatrix<S> kron(const DenseMatrix<S>& a, const DenseMatrix<S>& b) {
  DenseMatrix<S> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (is_zero(a(i, j))) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    }
  return out;
}

}  // namespace lrswap
