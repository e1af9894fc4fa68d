#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "dense_matrix.hpp"
#include "errors.hpp"
#include "scalar.hpp"
#include "words.hpp"

namespace lrswap {

/// 0/1 operator in which every column holds at most one unit entry, stored as
/// a partial map on basis indices. Products of embedded B_i / B'_i stay in
/// this form, so they compose as partial functions.
class BasisMap {
 public:
  static constexpr std::int64_t kNone = -1;

  BasisMap() = default;
  explicit BasisMap(std::size_t dim) : image_(dim, kNone) {}

  static BasisMap identity(std::size_t dim) {
    BasisMap m(dim);
    for (std::size_t i = 0; i < dim; ++i) m.image_[i] = static_cast<std::int64_t>(i);
    return m;
  }

  std::size_t dim() const { return image_.size(); }

  std::optional<std::size_t> apply(std::size_t col) const {
    auto v = image_.at(col);
    if (v == kNone) return std::nullopt;
    return static_cast<std::size_t>(v);
  }

  void set(std::size_t col, std::size_t row) { image_.at(col) = static_cast<std::int64_t>(row); }
  void clear(std::size_t col) { image_.at(col) = kNone; }

  /// Matrix product: (a * b) e_v = a (b e_v).
  friend BasisMap operator*(const BasisMap& a, const BasisMap& b) {
    require(a.dim() == b.dim(), ErrorKind::InvalidParameter, "basis map dimension mismatch");
    BasisMap out(a.dim());
    for (std::size_t c = 0; c < b.dim(); ++c) {
      auto mid = b.image_[c];
      if (mid != kNone) out.image_[c] = a.image_[static_cast<std::size_t>(mid)];
    }
    return out;
  }

  friend bool operator==(const BasisMap& a, const BasisMap& b) { return a.image_ == b.image_; }

  bool is_zero() const {
    return std::all_of(image_.begin(), image_.end(), [](auto v) { return v == kNone; });
  }

  std::optional<std::size_t> first_nonzero_column() const {
    for (std::size_t c = 0; c < image_.size(); ++c)
      if (image_[c] != kNone) return c;
    return std::nullopt;
  }

  std::optional<std::size_t> first_difference(const BasisMap& other) const {
    for (std::size_t c = 0; c < image_.size(); ++c)
      if (image_[c] != other.image_.at(c)) return c;
    return std::nullopt;
  }

 private:
  std::vector<std::int64_t> image_;
};

/// Sparse column-major operator on the N^n-dimensional word space over a
/// scalar ring S. Columns are kept sorted by row with explicit zeros removed.
template <class S>
class TensorOperator {
 public:
  struct Entry {
    std::uint32_t row;
    S value;
  };
  using Column = std::vector<Entry>;

  TensorOperator() = default;
  explicit TensorOperator(std::size_t dim) : columns_(dim) {}

  static TensorOperator identity(std::size_t dim) {
    TensorOperator op(dim);
    for (std::size_t c = 0; c < dim; ++c) op.columns_[c].push_back({static_cast<std::uint32_t>(c), S(1)});
    return op;
  }

  static TensorOperator from_basis_map(const BasisMap& m) {
    TensorOperator op(m.dim());
    for (std::size_t c = 0; c < m.dim(); ++c)
      if (auto r = m.apply(c)) op.columns_[c].push_back({static_cast<std::uint32_t>(*r), S(1)});
    return op;
  }

  static TensorOperator from_dense(const DenseMatrix<S>& d) {
    require(d.rows() == d.cols(), ErrorKind::InvalidParameter, "operator must be square");
    TensorOperator op(d.rows());
    for (std::size_t c = 0; c < d.cols(); ++c)
      for (std::size_t r = 0; r < d.rows(); ++r)
        if (!is_zero(d(r, c))) op.columns_[c].push_back({static_cast<std::uint32_t>(r), d(r, c)});
    return op;
  }

  DenseMatrix<S> to_dense() const {
    DenseMatrix<S> d(dim(), dim());
    for (std::size_t c = 0; c < dim(); ++c)
      for (const auto& e : columns_[c]) d(e.row, c) = e.value;
    return d;
  }

  std::size_t dim() const { return columns_.size(); }
  const Column& column(std::size_t c) const { return columns_.at(c); }

  S entry(std::size_t row, std::size_t col) const {
    for (const auto& e : columns_.at(col))
      if (e.row == row) return e.value;
    return S(0);
  }

  /// Overwrites (or inserts) one entry; zero values erase it.
  void set(std::size_t row, std::size_t col, const S& value) {
    auto& column = columns_.at(col);
    auto it = std::lower_bound(column.begin(), column.end(), row,
                               [](const Entry& e, std::size_t r) { return e.row < r; });
    if (it != column.end() && it->row == row) {
      if (is_zero(value))
        column.erase(it);
      else
        it->value = value;
    } else if (!is_zero(value)) {
      column.insert(it, Entry{static_cast<std::uint32_t>(row), value});
    }
  }

  std::size_t nonzeros() const {
    std::size_t n = 0;
    for (const auto& c : columns_) n += c.size();
    return n;
  }

  /// True when each column has at most one entry and it equals 1.
  bool is_partial_permutation() const {
    for (const auto& c : columns_) {
      if (c.size() > 1) return false;
      if (c.size() == 1 && !(c.front().value == S(1))) return false;
    }
    return true;
  }

  bool is_zero_operator() const {
    return std::all_of(columns_.begin(), columns_.end(), [](const Column& c) { return c.empty(); });
  }

  friend TensorOperator operator*(const TensorOperator& a, const TensorOperator& b) {
    require(a.dim() == b.dim(), ErrorKind::InvalidParameter, "operator dimension mismatch");
    TensorOperator out(a.dim());
    std::map<std::uint32_t, S> acc;
    for (std::size_t c = 0; c < b.dim(); ++c) {
      acc.clear();
      for (const auto& eb : b.columns_[c])
        for (const auto& ea : a.columns_[eb.row]) acc[ea.row] += ea.value * eb.value;
      for (auto& [row, value] : acc)
        if (!is_zero(value)) out.columns_[c].push_back({row, value});
    }
    return out;
  }

  friend TensorOperator operator+(const TensorOperator& a, const TensorOperator& b) {
    return combine(a, b, S(1));
  }
  friend TensorOperator operator-(const TensorOperator& a, const TensorOperator& b) {
    return combine(a, b, S(-1));
  }

  friend TensorOperator operator*(const S& s, const TensorOperator& a) {
    TensorOperator out(a.dim());
    if (is_zero(s)) return out;
    for (std::size_t c = 0; c < a.dim(); ++c)
      for (const auto& e : a.columns_[c]) out.columns_[c].push_back({e.row, s * e.value});
    return out;
  }

  friend bool operator==(const TensorOperator& a, const TensorOperator& b) {
    if (a.dim() != b.dim()) return false;
    for (std::size_t c = 0; c < a.dim(); ++c) {
      const auto& x = a.columns_[c];
      const auto& y = b.columns_[c];
      if (x.size() != y.size()) return false;
      for (std::size_t k = 0; k < x.size(); ++k)
        if (x[k].row != y[k].row || !(x[k].value == y[k].value)) return false;
    }
    return true;
  }

  /// First column in which the operators differ (witness basis word).
  std::optional<std::size_t> first_difference(const TensorOperator& other) const {
    for (std::size_t c = 0; c < dim(); ++c) {
      const auto& x = columns_[c];
      const auto& y = other.columns_.at(c);
      if (x.size() != y.size()) return c;
      for (std::size_t k = 0; k < x.size(); ++k)
        if (x[k].row != y[k].row || !(x[k].value == y[k].value)) return c;
    }
    return std::nullopt;
  }

  std::optional<std::size_t> first_nonzero_column() const {
    for (std::size_t c = 0; c < dim(); ++c)
      if (!columns_[c].empty()) return c;
    return std::nullopt;
  }

  double max_abs_diff(const TensorOperator& other) const {
    double m = 0.0;
    const auto d = *this - other;
    for (const auto& col : d.columns_)
      for (const auto& e : col) m = std::max(m, magnitude(e.value));
    return m;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& col : columns_)
      for (const auto& e : col) m = std::max(m, magnitude(e.value));
    return m;
  }

  /// y = A x for a dense coefficient vector x.
  std::vector<S> apply(const std::vector<S>& x) const {
    require(x.size() == dim(), ErrorKind::InvalidParameter, "vector dimension mismatch");
    std::vector<S> y(dim(), S(0));
    for (std::size_t c = 0; c < dim(); ++c) {
      if (is_zero(x[c])) continue;
      for (const auto& e : columns_[c]) y[e.row] += e.value * x[c];
    }
    return y;
  }

  /// Applies a 0/1 operator to a single basis vector, asserting the
  /// partial-permutation property along the way.
  std::optional<std::size_t> apply_basis(std::size_t col) const {
    const auto& c = columns_.at(col);
    if (c.empty()) return std::nullopt;
    require(c.size() == 1 && c.front().value == S(1), ErrorKind::NumericalInconsistency,
            "operator is not a partial permutation at column " + std::to_string(col));
    return c.front().row;
  }

 private:
  static TensorOperator combine(const TensorOperator& a, const TensorOperator& b, const S& sign) {
    require(a.dim() == b.dim(), ErrorKind::InvalidParameter, "operator dimension mismatch");
    TensorOperator out(a.dim());
    for (std::size_t c = 0; c < a.dim(); ++c) {
      const auto& x = a.columns_[c];
      const auto& y = b.columns_[c];
      std::size_t i = 0, j = 0;
      auto& o = out.columns_[c];
      while (i < x.size() || j < y.size()) {
        if (j == y.size() || (i < x.size() && x[i].row < y[j].row)) {
          o.push_back(x[i++]);
        } else if (i == x.size() || y[j].row < x[i].row) {
          o.push_back({y[j].row, sign * y[j].value});
          ++j;
        } else {
          S v = x[i].value + sign * y[j].value;
          if (!is_zero(v)) o.push_back({x[i].row, v});
          ++i;
          ++j;
        }
      }
    }
    return out;
  }

  std::vector<Column> columns_;
};

/// I^{(i-1)} (x) local (x) I^{(n-i-1)} for a two-site operator acting on the
/// letters at 1-based positions i, i+1 of the n-letter words.
template <class S>
TensorOperator<S> embed_two_site(const TensorOperator<S>& local, const WordSpace& space, int site) {
  const int n = space.length();
  const std::size_t N = static_cast<std::size_t>(space.species());
  require(site >= 1 && site <= n - 1, ErrorKind::InvalidParameter,
          "site " + std::to_string(site) + " outside 1.." + std::to_string(n - 1));
  require(local.dim() == N * N, ErrorKind::InvalidParameter, "two-site operator must be N^2 x N^2");
  const std::size_t s_left = space.stride(site - 1);
  const std::size_t s_right = space.stride(site);
  TensorOperator<S> out(space.size());
  for (std::size_t col = 0; col < space.size(); ++col) {
    const std::size_t a = (col / s_left) % N;
    const std::size_t b = (col / s_right) % N;
    const std::size_t base = col - a * s_left - b * s_right;
    for (const auto& e : local.column(a * N + b)) {
      const std::size_t row = base + (e.row / N) * s_left + (e.row % N) * s_right;
      out.set(row, col, e.value);
    }
  }
  return out;
}

}  // namespace lrswap
