#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "eigcount/errors.hpp"
#include "eigcount/matrix.hpp"

namespace eigcount {

namespace detail {

/// Householder reflector H = I - beta v v*, chosen so that H x = alpha e_1.
struct Reflector {
  std::vector<cplx> v;
  double beta = 0.0;
  cplx alpha{};
};

inline Reflector make_reflector(std::span<const cplx> x) {
  Reflector h;
  h.v.assign(x.begin(), x.end());
  const double nx = norm2(x);
  if (nx == 0.0) return h;  // beta = 0: identity
  const cplx x0 = x[0];
  const cplx phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx{1.0};
  h.alpha = -phase * nx;
  h.v[0] -= h.alpha;
  const double vv = std::pow(norm2(h.v), 2);
  h.beta = vv > 0.0 ? 2.0 / vv : 0.0;
  return h;
}

/// Applies H to rows [offset, offset + v.size()) of column c.
inline void apply_reflector(const Reflector& h, std::span<cplx> c, std::size_t offset) {
  if (h.beta == 0.0) return;
  cplx s{};
  for (std::size_t i = 0; i < h.v.size(); ++i) s += std::conj(h.v[i]) * c[offset + i];
  s *= h.beta;
  for (std::size_t i = 0; i < h.v.size(); ++i) c[offset + i] -= s * h.v[i];
}

/// Q = H_0 H_1 ... H_{k-1} restricted to its first k columns.
inline DenseMatrix accumulate_q(const std::vector<Reflector>& hs, std::size_t m, std::size_t k) {
  DenseMatrix q(m, k);
  for (std::size_t j = 0; j < k; ++j) q(j, j) = 1.0;
  for (std::size_t r = hs.size(); r-- > 0;)
    for (std::size_t j = 0; j < k; ++j) apply_reflector(hs[r], q.col(j), r);
  return q;
}

}  // namespace detail

struct ThinQR {
  DenseMatrix q;  // m x k orthonormal, k = min(m, n)
  DenseMatrix r;  // k x n upper triangular
};

/// Thin Householder QR: U = Q R.
inline ThinQR qr_thin(DenseMatrix u) {
  const std::size_t m = u.rows(), n = u.cols();
  if (m == 0 || n == 0) throw ShapeError("qr_thin: empty matrix");
  const std::size_t k = std::min(m, n);
  std::vector<detail::Reflector> hs;
  hs.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    auto cj = u.col(j);
    hs.push_back(detail::make_reflector(cj.subspan(j)));
    const auto& h = hs.back();
    if (h.beta != 0.0) {
      cj[j] = h.alpha;
      std::fill(cj.begin() + static_cast<std::ptrdiff_t>(j) + 1, cj.end(), cplx{});
    }
    for (std::size_t c = j + 1; c < n; ++c) detail::apply_reflector(h, u.col(c), j);
  }
  ThinQR out;
  out.q = detail::accumulate_q(hs, m, k);
  out.r = DenseMatrix(k, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i <= std::min(j, k - 1); ++i) out.r(i, j) = u(i, j);
  return out;
}

/// Default relative rank tolerance: 16 eps max(m, n).
inline double default_rank_tolerance(std::size_t rows, std::size_t cols) {
  return static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon() * 16.0;
}

struct RRQRFactors {
  DenseMatrix q1;                 // n x rank orthonormal factor
  DenseMatrix r1;                 // rank x cols, columns in pivoted order
  std::vector<std::size_t> perm;  // U(:, perm[j]) is the j-th pivoted column
  std::vector<double> diag;       // |R_ii| for every elimination step performed
  std::size_t rank = 0;
  double tolerance = 0.0;
};

/// Column-pivoted Householder QR, U Pi = Q1 R1. The numerical rank counts the
/// diagonal entries with |R_ii| > tol * |R_11| (strict). Elimination stops once the
/// largest remaining column norm drops to the threshold.
inline RRQRFactors qr_column_pivoted(DenseMatrix u, std::optional<double> rank_tol = std::nullopt) {
  const std::size_t m = u.rows(), n = u.cols();
  if (m == 0 || n == 0) throw ShapeError("qr_column_pivoted: empty matrix");
  RRQRFactors out;
  out.tolerance = rank_tol.value_or(default_rank_tolerance(m, n));
  out.perm.resize(n);
  std::iota(out.perm.begin(), out.perm.end(), std::size_t{0});

  const std::size_t kmax = std::min(m, n);
  std::vector<detail::Reflector> hs;
  hs.reserve(kmax);
  std::vector<double> norms(n);
  double r11 = 0.0;

  for (std::size_t k = 0; k < kmax; ++k) {
    // exact trailing norms: no downdating, so no cancellation issues
    for (std::size_t j = k; j < n; ++j) norms[j] = norm2(u.col(j).subspan(k));
    std::size_t p = k;
    for (std::size_t j = k + 1; j < n; ++j)
      if (norms[j] > norms[p]) p = j;
    const double pivot_norm = norms[p];
    if (k == 0) r11 = pivot_norm;
    if (!(pivot_norm > out.tolerance * r11) || pivot_norm == 0.0) break;
    if (p != k) {
      std::swap_ranges(u.col(k).begin(), u.col(k).end(), u.col(p).begin());
      std::swap(out.perm[k], out.perm[p]);
    }
    auto ck = u.col(k);
    hs.push_back(detail::make_reflector(ck.subspan(k)));
    const auto& h = hs.back();
    if (h.beta != 0.0) {
      ck[k] = h.alpha;
      std::fill(ck.begin() + static_cast<std::ptrdiff_t>(k) + 1, ck.end(), cplx{});
    }
    for (std::size_t c = k + 1; c < n; ++c) detail::apply_reflector(h, u.col(c), k);
    out.diag.push_back(std::abs(ck[k]));
  }

  out.rank = hs.size();
  out.q1 = detail::accumulate_q(hs, m, out.rank);
  out.r1 = DenseMatrix(out.rank, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < std::min(j + 1, out.rank); ++i) out.r1(i, j) = u(i, j);
  return out;
}

}  // namespace eigcount
