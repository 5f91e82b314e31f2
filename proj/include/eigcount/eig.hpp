#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "eigcount/errors.hpp"
#include "eigcount/matrix.hpp"
#include "eigcount/qr.hpp"

namespace eigcount {

/// QR iteration ran out of sweeps; carries whatever eigenvalues had deflated.
class EigenFailure : public NumericalFailure {
public:
  explicit EigenFailure(std::vector<cplx> partial)
      : NumericalFailure("eig_dense: QR iteration did not converge"), partial_(std::move(partial)) {}
  const std::vector<cplx>& partial() const noexcept { return partial_; }

private:
  std::vector<cplx> partial_;
};

struct DenseEigen {
  std::vector<cplx> values;
  /// Unit-norm right eigenvectors as columns (empty unless requested).
  DenseMatrix vectors;
};

namespace detail {

struct Givens {
  double c = 1.0;
  cplx s{};
};

/// Rotation with [c s; -conj(s) c] [a; b] = [r; 0], c real.
inline Givens make_givens(cplx a, cplx b) {
  Givens g;
  if (b == cplx{}) return g;
  if (a == cplx{}) {
    g.c = 0.0;
    g.s = std::conj(b) / std::abs(b);
    return g;
  }
  const double na = std::abs(a);
  const double nr = std::hypot(na, std::abs(b));
  g.c = na / nr;
  g.s = (a / na) * std::conj(b) / nr;
  return g;
}

/// Rows (i, i+1) <- G [row i; row i+1] over columns [c0, c1).
inline void rotate_rows(DenseMatrix& h, const Givens& g, std::size_t i, std::size_t c0, std::size_t c1) {
  for (std::size_t j = c0; j < c1; ++j) {
    const cplx x = h(i, j), y = h(i + 1, j);
    h(i, j) = g.c * x + g.s * y;
    h(i + 1, j) = -std::conj(g.s) * x + g.c * y;
  }
}

/// Columns (j, j+1) <- [col j, col j+1] G* over rows [r0, r1).
inline void rotate_cols(DenseMatrix& h, const Givens& g, std::size_t j, std::size_t r0, std::size_t r1) {
  for (std::size_t i = r0; i < r1; ++i) {
    const cplx x = h(i, j), y = h(i, j + 1);
    h(i, j) = g.c * x + std::conj(g.s) * y;
    h(i, j + 1) = -g.s * x + g.c * y;
  }
}

/// Householder reduction to upper Hessenberg form; z accumulates the similarity.
inline void hessenberg(DenseMatrix& h, DenseMatrix* z) {
  const std::size_t n = h.rows();
  if (n < 3) return;
  for (std::size_t k = 0; k + 2 < n; ++k) {
    std::vector<cplx> x(n - k - 1);
    for (std::size_t i = k + 1; i < n; ++i) x[i - k - 1] = h(i, k);
    const Reflector r = make_reflector(x);
    if (r.beta == 0.0) continue;
    for (std::size_t j = k; j < n; ++j) apply_reflector(r, h.col(j), k + 1);
    // right application: rows of h times H
    for (std::size_t i = 0; i < n; ++i) {
      cplx s{};
      for (std::size_t t = 0; t < r.v.size(); ++t) s += h(i, k + 1 + t) * r.v[t];
      s *= r.beta;
      for (std::size_t t = 0; t < r.v.size(); ++t) h(i, k + 1 + t) -= s * std::conj(r.v[t]);
    }
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
    if (z) {
      for (std::size_t i = 0; i < n; ++i) {
        cplx s{};
        for (std::size_t t = 0; t < r.v.size(); ++t) s += (*z)(i, k + 1 + t) * r.v[t];
        s *= r.beta;
        for (std::size_t t = 0; t < r.v.size(); ++t) (*z)(i, k + 1 + t) -= s * std::conj(r.v[t]);
      }
    }
  }
}

/// Eigenvalue of the trailing 2x2 block [a b; c d] closest to d.
inline cplx wilkinson_shift(cplx a, cplx b, cplx c, cplx d) {
  const cplx half = 0.5 * (a - d);
  const cplx disc = std::sqrt(half * half + b * c);
  const cplx r1 = 0.5 * (a + d) + disc;
  const cplx r2 = 0.5 * (a + d) - disc;
  return std::abs(r1 - d) < std::abs(r2 - d) ? r1 : r2;
}

}  // namespace detail

/// Eigenvalues (and optionally unit right eigenvectors) of a small dense matrix:
/// Householder Hessenberg reduction followed by single-shift complex QR iteration.
inline DenseEigen eig_dense(const DenseMatrix& m, bool want_vectors = false) {
  if (m.rows() != m.cols()) throw ShapeError("eig_dense: matrix is not square");
  if (!m.all_finite()) throw NumericalFailure("eig_dense: non-finite entry");
  const std::size_t n = m.rows();
  DenseEigen out;
  if (n == 0) return out;

  DenseMatrix h = m;
  DenseMatrix z;
  if (want_vectors) z = DenseMatrix::identity(n);
  detail::hessenberg(h, want_vectors ? &z : nullptr);

  const double eps = std::numeric_limits<double>::epsilon();
  const double hnorm = std::max(h.frobenius_norm(), std::numeric_limits<double>::min());
  const std::size_t max_sweeps = 30 * std::max<std::size_t>(n, 10);

  std::vector<cplx> values(n);
  std::vector<bool> done(n, false);
  std::size_t hi = n - 1;
  std::size_t iter = 0;
  std::size_t total = 0;

  auto partial = [&] {
    std::vector<cplx> p;
    for (std::size_t i = 0; i < n; ++i)
      if (done[i]) p.push_back(values[i]);
    return p;
  };

  while (true) {
    // deflation search
    std::size_t l = hi;
    while (l > 0) {
      const double sub = std::abs(h(l, l - 1));
      double ref = std::abs(h(l, l)) + std::abs(h(l - 1, l - 1));
      if (ref == 0.0) ref = hnorm;
      if (sub <= eps * ref) {
        h(l, l - 1) = 0.0;
        break;
      }
      --l;
    }
    if (l == hi) {
      values[hi] = h(hi, hi);
      done[hi] = true;
      iter = 0;
      if (hi == 0) break;
      --hi;
      continue;
    }
    if (++total > max_sweeps) throw EigenFailure(partial());
    ++iter;

    cplx shift;
    if (iter % 10 == 0) {
      // exceptional shift breaks rare cycles
      shift = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1)) * cplx(1.0, 0.5);
    } else {
      shift = detail::wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
    }

    const std::size_t col_end = want_vectors ? n : hi + 1;
    const std::size_t row_begin = want_vectors ? 0 : l;
    for (std::size_t i = l; i <= hi; ++i) h(i, i) -= shift;
    std::vector<detail::Givens> rots(hi - l);
    for (std::size_t k = l; k < hi; ++k) {
      rots[k - l] = detail::make_givens(h(k, k), h(k + 1, k));
      detail::rotate_rows(h, rots[k - l], k, k, col_end);
      h(k + 1, k) = 0.0;
    }
    for (std::size_t k = l; k < hi; ++k) {
      detail::rotate_cols(h, rots[k - l], k, row_begin, std::min(k + 2, hi) + 1);
      if (want_vectors) detail::rotate_cols(z, rots[k - l], k, 0, n);
    }
    for (std::size_t i = l; i <= hi; ++i) h(i, i) += shift;
  }

  out.values = std::move(values);
  if (!want_vectors) return out;

  // eigenvectors of the triangular Schur factor, then back to the original basis
  const double small = std::max(eps * hnorm, std::numeric_limits<double>::min());
  out.vectors = DenseMatrix(n, n);
  std::vector<cplx> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    const cplx lambda = h(k, k);
    std::fill(v.begin(), v.end(), cplx{});
    v[k] = 1.0;
    for (std::size_t i = k; i-- > 0;) {
      cplx s{};
      for (std::size_t j = i + 1; j <= k; ++j) s += h(i, j) * v[j];
      cplx d = h(i, i) - lambda;
      if (std::abs(d) < small) d = small;
      v[i] = -s / d;
      const double big = std::abs(v[i]);
      if (big > 1e100) {
        for (std::size_t j = i; j <= k; ++j) v[j] /= big;
      }
    }
    auto x = out.vectors.col(k);
    for (std::size_t i = 0; i < n; ++i) {
      cplx s{};
      for (std::size_t j = 0; j <= k; ++j) s += z(i, j) * v[j];
      x[i] = s;
    }
    const double nx = norm2(x);
    for (auto& e : x) e /= nx;
  }
  return out;
}

}  // namespace eigcount
