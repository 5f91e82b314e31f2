#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "eigcount/errors.hpp"
#include "eigcount/matrix.hpp"

namespace eigcount {

/// Relative tolerances of the dense kernels.
inline constexpr double tol_lu = 1e-12;
inline constexpr double tol_solve = 1e-12;
inline constexpr double tol_pivot = 1e-14;

/// P A = L U with partial pivoting. L (unit lower, diagonal implicit) and U share `lu`.
struct LUFactors {
  DenseMatrix lu;
  /// Row i of P A is row perm[i] of A.
  std::vector<std::size_t> perm;
  /// Some pivot fell below tol_pivot * max |a_ij|.
  bool near_singular = false;
  /// max |u_ij| / max |a_ij|.
  double growth = 1.0;
  /// min |u_ii| / max |a_ij|.
  double min_pivot_ratio = 1.0;

  std::size_t size() const noexcept { return lu.rows(); }

  DenseMatrix lower() const {
    const std::size_t n = size();
    DenseMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      l(j, j) = 1.0;
      for (std::size_t i = j + 1; i < n; ++i) l(i, j) = lu(i, j);
    }
    return l;
  }

  DenseMatrix upper() const {
    const std::size_t n = size();
    DenseMatrix u(n, n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i <= j; ++i) u(i, j) = lu(i, j);
    return u;
  }

  /// Applies the row permutation: returns P A.
  DenseMatrix permute(const DenseMatrix& a) const {
    DenseMatrix out(a.rows(), a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) = a(perm[i], j);
    return out;
  }
};

/// Right-looking LU with partial pivoting. Throws SingularMatrix on an exactly zero pivot column.
inline LUFactors lu_factor(DenseMatrix a) {
  if (a.rows() != a.cols()) throw ShapeError("lu_factor: matrix is not square");
  if (!a.all_finite()) throw NumericalFailure("lu_factor: non-finite entry");
  const std::size_t n = a.rows();
  LUFactors f;
  f.perm.resize(n);
  std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
  const double amax = a.max_abs();
  double umax = 0.0;
  double min_pivot = amax;

  for (std::size_t k = 0; k < n; ++k) {
    auto ck = a.col(k);
    std::size_t p = k;
    double best = std::abs(ck[k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(ck[i]);
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best == 0.0) throw SingularMatrix(k);
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      std::swap(f.perm[k], f.perm[p]);
    }
    min_pivot = std::min(min_pivot, best);
    const cplx inv = 1.0 / ck[k];
    for (std::size_t i = k + 1; i < n; ++i) ck[i] *= inv;
    for (std::size_t j = k + 1; j < n; ++j) {
      auto cj = a.col(j);
      const cplx akj = cj[k];
      if (akj == cplx{}) continue;
      for (std::size_t i = k + 1; i < n; ++i) cj[i] -= ck[i] * akj;
    }
  }
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i <= j; ++i) umax = std::max(umax, std::abs(a(i, j)));

  f.growth = amax > 0.0 ? umax / amax : 1.0;
  f.min_pivot_ratio = amax > 0.0 ? min_pivot / amax : 0.0;
  f.near_singular = f.min_pivot_ratio < tol_pivot;
  f.lu = std::move(a);
  return f;
}

/// Solves A X = rhs by forward and back substitution.
inline DenseMatrix lu_solve(const LUFactors& f, const DenseMatrix& rhs) {
  const std::size_t n = f.size();
  if (rhs.rows() != n) throw ShapeError("lu_solve: right-hand side has the wrong row count");
  const DenseMatrix& lu = f.lu;
  DenseMatrix x(n, rhs.cols());
  for (std::size_t c = 0; c < rhs.cols(); ++c) {
    auto xc = x.col(c);
    auto bc = rhs.col(c);
    for (std::size_t i = 0; i < n; ++i) xc[i] = bc[f.perm[i]];
    // L y = P b, column oriented
    for (std::size_t k = 0; k < n; ++k) {
      const cplx yk = xc[k];
      if (yk == cplx{}) continue;
      auto lk = lu.col(k);
      for (std::size_t i = k + 1; i < n; ++i) xc[i] -= lk[i] * yk;
    }
    // U x = y
    for (std::size_t k = n; k-- > 0;) {
      auto uk = lu.col(k);
      xc[k] /= uk[k];
      const cplx xk = xc[k];
      if (xk == cplx{}) continue;
      for (std::size_t i = 0; i < k; ++i) xc[i] -= uk[i] * xk;
    }
  }
  return x;
}

/// Explicit inverse; only used on small projected matrices.
inline DenseMatrix lu_inverse(const LUFactors& f) { return lu_solve(f, DenseMatrix::identity(f.size())); }

}  // namespace eigcount
