#pragma once

// Independent ground truth for tests and the experiment harness. Everything here
// goes through LAPACK (zggev, zgesvd, zgesv) rather than the library's own kernels.

#include <complex>
#include <cstddef>
#include <limits>
#include <random>
#include <vector>

#ifndef lapack_complex_double
#define lapack_complex_double std::complex<double>
#endif
#include <lapacke.h>

#include "eigcount/errors.hpp"
#include "eigcount/matrix.hpp"
#include "eigcount/quadrature.hpp"

namespace eigcount::oracle {

struct SpectrumOracle {
  /// Finite eigenvalues in LAPACK order.
  std::vector<cplx> finite;
  std::size_t infinite = 0;
  /// Right eigenvectors (unit 2-norm) matching `finite`.
  DenseMatrix vectors;
  /// max ||A x - lambda B x|| / ||x|| over the finite pairs.
  double max_residual = 0.0;

  std::size_t size() const noexcept { return finite.size() + infinite; }
};

/// All eigenvalues of A x = lambda B x via QZ. beta below n eps ||B||_F counts as infinite.
inline SpectrumOracle dense_generalized_eig(const DenseMatrix& a, const DenseMatrix& b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.rows() != n || b.cols() != n) throw ShapeError("oracle: pencil is not square");
  if (n > 2048) throw std::invalid_argument("oracle: n must not exceed 2048");
  std::vector<cplx> aa(a.data().begin(), a.data().end());
  std::vector<cplx> bb(b.data().begin(), b.data().end());
  std::vector<cplx> alpha(n), beta(n), vr(n * n);
  const auto ni = static_cast<lapack_int>(n);
  const lapack_int info = LAPACKE_zggev(LAPACK_COL_MAJOR, 'N', 'V', ni, aa.data(), ni, bb.data(), ni,
                                        alpha.data(), beta.data(), nullptr, 1, vr.data(), ni);
  if (info != 0) throw NumericalFailure("oracle: zggev failed with info " + std::to_string(info));

  const double bnorm = b.frobenius_norm();
  const double cut = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * std::max(bnorm, 1e-300);
  SpectrumOracle out;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(beta[i]) <= cut) {
      ++out.infinite;
    } else {
      out.finite.push_back(alpha[i] / beta[i]);
      keep.push_back(i);
    }
  }
  out.vectors = DenseMatrix(n, keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    double nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) nrm += std::norm(vr[i + keep[k] * n]);
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = vr[i + keep[k] * n] / nrm;
  }
  for (std::size_t k = 0; k < keep.size(); ++k) {
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cplx s{};
      for (std::size_t j = 0; j < n; ++j) s += (a(i, j) - out.finite[k] * b(i, j)) * out.vectors(j, k);
      r += std::norm(s);
    }
    out.max_residual = std::max(out.max_residual, std::sqrt(r));
  }
  return out;
}

/// Eigenvalues of a square matrix via zgeev.
inline std::vector<cplx> standard_eig(const DenseMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<cplx> a(m.data().begin(), m.data().end()), w(n);
  const auto ni = static_cast<lapack_int>(n);
  const lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', ni, a.data(), ni, w.data(), nullptr, 1, nullptr, 1);
  if (info != 0) throw NumericalFailure("oracle: zgeev failed");
  return w;
}

/// Singular values, descending.
inline std::vector<double> singular_values(const DenseMatrix& m) {
  const auto r = static_cast<lapack_int>(m.rows()), c = static_cast<lapack_int>(m.cols());
  std::vector<cplx> a(m.data().begin(), m.data().end());
  std::vector<double> s(static_cast<std::size_t>(std::min(r, c)));
  std::vector<double> superb(s.size() + 1);
  const lapack_int info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'N', 'N', r, c, a.data(), r, s.data(), nullptr, 1,
                                         nullptr, 1, superb.data());
  if (info != 0) throw NumericalFailure("oracle: zgesvd failed");
  return s;
}

/// X solving A X = B.
inline DenseMatrix solve(const DenseMatrix& a, const DenseMatrix& b) {
  const auto n = static_cast<lapack_int>(a.rows());
  std::vector<cplx> aa(a.data().begin(), a.data().end()), bb(b.data().begin(), b.data().end());
  std::vector<lapack_int> ipiv(a.rows());
  const lapack_int info = LAPACKE_zgesv(LAPACK_COL_MAJOR, n, static_cast<lapack_int>(b.cols()), aa.data(), n,
                                        ipiv.data(), bb.data(), n);
  if (info != 0) throw NumericalFailure("oracle: zgesv failed");
  return DenseMatrix(b.rows(), b.cols(), std::move(bb));
}

/// Orthonormal basis of span(m) from the SVD (left singular vectors above tol * s_max).
inline DenseMatrix orthonormal_basis(const DenseMatrix& m, double tol = 1e-12) {
  const auto r = static_cast<lapack_int>(m.rows()), c = static_cast<lapack_int>(m.cols());
  const std::size_t k = static_cast<std::size_t>(std::min(r, c));
  std::vector<cplx> a(m.data().begin(), m.data().end()), u(m.rows() * k);
  std::vector<double> s(k), superb(k + 1);
  const lapack_int info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'S', 'N', r, c, a.data(), r, s.data(), u.data(), r,
                                         nullptr, 1, superb.data());
  if (info != 0) throw NumericalFailure("oracle: zgesvd failed");
  std::size_t rank = 0;
  while (rank < k && s[rank] > tol * s[0]) ++rank;
  u.resize(m.rows() * rank);
  return DenseMatrix(m.rows(), rank, std::move(u));
}

/// Sines of the principal angles between span(x) and span(y), x and y orthonormal.
/// Returns, for each column direction of y, how far it lies outside span(x).
inline std::vector<double> principal_angle_sines(const DenseMatrix& x, const DenseMatrix& y) {
  // singular values of (I - X X*) Y are the sines of the principal angles
  DenseMatrix proj = y;
  const DenseMatrix coeff = adjoint_times(x, y);
  proj -= x * coeff;
  return singular_values(proj);
}

struct ExactCount {
  std::size_t count = 0;
  std::vector<cplx> near_boundary;
};

/// Finite eigenvalues with |lambda - c| < rho; those within band * rho of the circle are listed.
inline ExactCount exact_count(const SpectrumOracle& spec, const Disk& disk, double band) {
  ExactCount out;
  for (const auto& l : spec.finite) {
    const double r = std::abs(l - disk.center);
    if (r < disk.radius) ++out.count;
    if (std::abs(r - disk.radius) <= band * disk.radius) out.near_boundary.push_back(l);
  }
  return out;
}

struct DiagonalFilterMatrix {
  std::vector<cplx> diag;
  std::size_t q = 0;
  Disk disk;
};

/// diag(D) for A = S Lambda S^{-1}, B = I: D = (1/2) sum_j w_j (z_j - c) (z_j I - Lambda)^{-1},
/// evaluated entry by entry straight from the node list.
inline DiagonalFilterMatrix diagonal_filter(std::span<const cplx> lambdas, const ContourRule& rule) {
  DiagonalFilterMatrix out;
  out.q = rule.size();
  out.disk = rule.disk;
  for (const auto& l : lambdas) {
    cplx d{};
    for (std::size_t j = 0; j < rule.size(); ++j) d += rule.weights[j] * (rule.z[j] - rule.disk.center) / (rule.z[j] - l);
    out.diag.push_back(0.5 * d);
  }
  return out;
}

/// n x n matrix of i.i.d. N(0, 1) reals.
inline DenseMatrix randn(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseMatrix m(rows, cols);
  for (auto& v : m.data()) v = normal(rng);
  return m;
}

/// S diag(lambdas) S^{-1}.
inline DenseMatrix similar_to_diagonal(const DenseMatrix& s, std::span<const cplx> lambdas) {
  // A S = S Lambda  =>  A = (S Lambda) S^{-1}  =>  A^T = S^{-T} (S Lambda)^T
  const DenseMatrix sl = s * DenseMatrix::diagonal(lambdas);
  const auto transpose = [](const DenseMatrix& m) {
    DenseMatrix t(m.cols(), m.rows());
    for (std::size_t j = 0; j < m.cols(); ++j)
      for (std::size_t i = 0; i < m.rows(); ++i) t(j, i) = m(i, j);
    return t;
  };
  return transpose(solve(transpose(s), transpose(sl)));
}

}  // namespace eigcount::oracle
