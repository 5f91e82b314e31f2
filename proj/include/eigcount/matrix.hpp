#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "eigcount/errors.hpp"

namespace eigcount {

inline bool is_finite(cplx v) noexcept { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

/// Dense complex matrix stored column-major: entry (i, j) lives at data[i + j * rows].
class DenseMatrix {
public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  /// Takes column-major data; rejects NaN/Inf.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols) throw ShapeError("DenseMatrix: data size does not match shape");
    if (!std::all_of(data_.begin(), data_.end(), is_finite))
      throw NumericalFailure("DenseMatrix: non-finite entry");
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  /// Row-major nested initializer, handy in tests: from_rows({{1, 2}, {3, 4}}).
  static DenseMatrix from_rows(const std::vector<std::vector<cplx>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows.front().size() : 0;
    std::vector<cplx> data(r * c);
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) throw ShapeError("from_rows: ragged rows");
      for (std::size_t j = 0; j < c; ++j) data[i + j * r] = rows[i][j];
    }
    return DenseMatrix(r, c, std::move(data));
  }

  static DenseMatrix diagonal(std::span<const cplx> d) {
    DenseMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  cplx& operator()(std::size_t i, std::size_t j) noexcept { return data_[i + j * rows_]; }
  const cplx& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i + j * rows_]; }

  std::span<cplx> col(std::size_t j) noexcept { return {data_.data() + j * rows_, rows_}; }
  std::span<const cplx> col(std::size_t j) const noexcept { return {data_.data() + j * rows_, rows_}; }

  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> data() const noexcept { return data_; }

  /// Columns [first, first + count).
  DenseMatrix cols_range(std::size_t first, std::size_t count) const {
    if (first + count > cols_) throw ShapeError("cols_range out of bounds");
    DenseMatrix out(rows_, count);
    std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(first * rows_), count * rows_,
                out.data_.begin());
    return out;
  }

  DenseMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw ShapeError("block out of bounds");
    DenseMatrix out(nr, nc);
    for (std::size_t j = 0; j < nc; ++j)
      for (std::size_t i = 0; i < nr; ++i) out(i, j) = (*this)(r0 + i, c0 + j);
    return out;
  }

  /// Conjugate transpose.
  DenseMatrix adjoint() const {
    DenseMatrix out(cols_, rows_);
    for (std::size_t j = 0; j < cols_; ++j)
      for (std::size_t i = 0; i < rows_; ++i) out(j, i) = std::conj((*this)(i, j));
    return out;
  }

  DenseMatrix conj() const {
    DenseMatrix out = *this;
    for (auto& v : out.data_) v = std::conj(v);
    return out;
  }

  DenseMatrix& operator+=(const DenseMatrix& o) {
    same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  DenseMatrix& operator-=(const DenseMatrix& o) {
    same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  DenseMatrix& operator*=(cplx a) {
    for (auto& v : data_) v *= a;
    return *this;
  }

  friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
  friend DenseMatrix operator*(cplx s, DenseMatrix a) { return a *= s; }

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols_ != b.rows_) throw ShapeError("matrix product: inner dimensions differ");
    DenseMatrix c(a.rows_, b.cols_);
    for (std::size_t j = 0; j < b.cols_; ++j) {
      cplx* cj = c.data_.data() + j * c.rows_;
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const cplx bkj = b(k, j);
        if (bkj == cplx{}) continue;
        const cplx* ak = a.data_.data() + k * a.rows_;
        for (std::size_t i = 0; i < a.rows_; ++i) cj[i] += ak[i] * bkj;
      }
    }
    return c;
  }

  /// Horizontal concatenation [this, right].
  DenseMatrix hcat(const DenseMatrix& right) const {
    if (empty() && rows_ == 0) return right;
    if (rows_ != right.rows_) throw ShapeError("hcat: row counts differ");
    DenseMatrix out(rows_, cols_ + right.cols_);
    std::copy(data_.begin(), data_.end(), out.data_.begin());
    std::copy(right.data_.begin(), right.data_.end(),
              out.data_.begin() + static_cast<std::ptrdiff_t>(data_.size()));
    return out;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return std::sqrt(s);
  }

  /// Maximum absolute column sum.
  double norm1() const {
    double best = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) {
      double s = 0.0;
      for (const auto& v : col(j)) s += std::abs(v);
      best = std::max(best, s);
    }
    return best;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  bool all_finite() const { return std::all_of(data_.begin(), data_.end(), is_finite); }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
  void same_shape(const DenseMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeError("shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

/// Euclidean norm of a vector.
inline double norm2(std::span<const cplx> v) {
  // scaled accumulation keeps tiny and huge vectors from under/overflowing
  double scale = 0.0;
  for (const auto& x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x / scale);
  return scale * std::sqrt(s);
}

/// Inner product x* y.
inline cplx dot(std::span<const cplx> x, std::span<const cplx> y) {
  cplx s{};
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

/// A* B without forming the adjoint.
inline DenseMatrix adjoint_times(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) throw ShapeError("adjoint_times: row counts differ");
  DenseMatrix c(a.cols(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::size_t i = 0; i < a.cols(); ++i) c(i, j) = dot(a.col(i), b.col(j));
  return c;
}

enum class Symmetry { general, symmetric, skew_symmetric, hermitian };

inline std::string to_string(Symmetry s) {
  switch (s) {
    case Symmetry::general: return "general";
    case Symmetry::symmetric: return "symmetric";
    case Symmetry::skew_symmetric: return "skew-symmetric";
    case Symmetry::hermitian: return "hermitian";
  }
  return "general";
}

struct Triplet {
  std::size_t row;
  std::size_t col;
  cplx value;
};

/// Coordinate-form sparse matrix. Entries are kept sorted by (col, row) with
/// duplicates summed; symmetric storage is expanded to explicit entries.
class SparseMatrix {
public:
  SparseMatrix() = default;

  /// Assembles from triplets in full (already expanded) form.
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> entries,
               Symmetry tag = Symmetry::general)
      : rows_(rows), cols_(cols), tag_(tag), entries_(std::move(entries)) {
    if (rows == 0 || cols == 0) throw ShapeError("SparseMatrix: dimensions must be positive");
    for (const auto& t : entries_) {
      if (t.row >= rows_ || t.col >= cols_) throw ShapeError("SparseMatrix: index out of range");
      if (!is_finite(t.value)) throw NumericalFailure("SparseMatrix: non-finite entry");
    }
    std::sort(entries_.begin(), entries_.end(), [](const Triplet& a, const Triplet& b) {
      return std::tie(a.col, a.row) < std::tie(b.col, b.row);
    });
    std::vector<Triplet> merged;
    merged.reserve(entries_.size());
    for (const auto& t : entries_) {
      if (!merged.empty() && merged.back().row == t.row && merged.back().col == t.col)
        merged.back().value += t.value;
      else
        merged.push_back(t);
    }
    entries_ = std::move(merged);
  }

  static SparseMatrix identity(std::size_t n) {
    std::vector<Triplet> e;
    e.reserve(n);
    for (std::size_t i = 0; i < n; ++i) e.push_back({i, i, 1.0});
    return SparseMatrix(n, n, std::move(e), Symmetry::symmetric);
  }

  /// Drops exact zeros of a dense matrix.
  static SparseMatrix from_dense(const DenseMatrix& d) {
    std::vector<Triplet> e;
    for (std::size_t j = 0; j < d.cols(); ++j)
      for (std::size_t i = 0; i < d.rows(); ++i)
        if (d(i, j) != cplx{}) e.push_back({i, j, d(i, j)});
    return SparseMatrix(d.rows(), d.cols(), std::move(e));
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Symmetry symmetry() const noexcept { return tag_; }
  std::size_t nnz() const noexcept { return entries_.size(); }
  std::span<const Triplet> entries() const noexcept { return entries_; }

  bool is_real() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const Triplet& t) { return t.value.imag() == 0.0; });
  }

  DenseMatrix to_dense() const {
    DenseMatrix d(rows_, cols_);
    for (const auto& t : entries_) d(t.row, t.col) = t.value;
    return d;
  }

  /// this * x
  DenseMatrix multiply(const DenseMatrix& x) const {
    if (x.rows() != cols_) throw ShapeError("SparseMatrix::multiply: dimension mismatch");
    DenseMatrix y(rows_, x.cols());
    for (std::size_t j = 0; j < x.cols(); ++j) {
      auto yj = y.col(j);
      auto xj = x.col(j);
      for (const auto& t : entries_) yj[t.row] += t.value * xj[t.col];
    }
    return y;
  }

  SparseMatrix scaled(cplx a) const {
    SparseMatrix out = *this;
    for (auto& t : out.entries_) t.value *= a;
    if (a.imag() != 0.0 && tag_ == Symmetry::hermitian) out.tag_ = Symmetry::general;
    return out;
  }

  /// Max absolute column sum.
  double norm1() const {
    std::vector<double> sums(cols_, 0.0);
    for (const auto& t : entries_) sums[t.col] += std::abs(t.value);
    return sums.empty() ? 0.0 : *std::max_element(sums.begin(), sums.end());
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Symmetry tag_ = Symmetry::general;
  std::vector<Triplet> entries_;
};

}  // namespace eigcount
