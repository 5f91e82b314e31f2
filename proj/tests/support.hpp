#pragma once

// Random diagonalizable pencils with a known spectrum, for property tests.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "eigcount/eigcount.hpp"
#include "eigcount/oracle.hpp"

namespace eigcount::testing {

struct KnownPencil {
  Pencil pencil;
  DenseMatrix a;
  DenseMatrix b;
  std::vector<cplx> eigenvalues;
  DenseMatrix eigenvectors;  // columns match `eigenvalues`
  Disk disk;
  std::size_t inside = 0;
};

/// Eigenvalue at polar offset (r * rho, phi) from the center, with r kept at
/// least `gap` away from 1.
inline cplx sample_eigenvalue(std::mt19937_64& rng, const Disk& disk, double gap, double r_max = 2.5) {
  std::uniform_real_distribution<double> rad(0.0, r_max);
  std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
  double r = 0.0;
  do {
    r = rad(rng);
  } while (std::abs(r - 1.0) < gap);
  return disk.center + std::polar(r * disk.radius, ang(rng));
}

/// A = P Lambda Q, B = P Q (or A = S Lambda S^{-1}, B = I when `standard`).
/// Eigenvectors are the columns of Q^{-1}.
inline KnownPencil make_pencil(std::uint64_t seed, std::size_t n, bool standard, double gap = 0.01) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> rad(0.5, 2.0);
  KnownPencil k{Pencil::standard(SparseMatrix::identity(n)), {}, {}, {}, {}, Disk({unit(rng), unit(rng)}, rad(rng)), 0};
  for (std::size_t i = 0; i < n; ++i) k.eigenvalues.push_back(sample_eigenvalue(rng, k.disk, gap));
  const DenseMatrix lam = DenseMatrix::diagonal(k.eigenvalues);
  if (standard) {
    const DenseMatrix s = oracle::randn(n, n, rng);
    k.a = oracle::similar_to_diagonal(s, k.eigenvalues);
    k.b = DenseMatrix::identity(n);
    k.eigenvectors = s;
  } else {
    const DenseMatrix p = oracle::randn(n, n, rng);
    const DenseMatrix q = oracle::randn(n, n, rng);
    k.a = p * lam * q;
    k.b = p * q;
    k.eigenvectors = oracle::solve(q, DenseMatrix::identity(n));
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double nrm = norm2(k.eigenvectors.col(j));
    for (auto& v : k.eigenvectors.col(j)) v /= nrm;
  }
  k.pencil = Pencil::from_dense(k.a, k.b);
  for (const auto& l : k.eigenvalues)
    if (k.disk.contains(l)) ++k.inside;
  return k;
}

/// Seeded dense complex matrix with N(0,1) real and imaginary parts.
inline DenseMatrix random_complex(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  DenseMatrix m(rows, cols);
  for (auto& v : m.data()) v = {normal(rng), normal(rng)};
  return m;
}

inline double max_abs_diff(const DenseMatrix& x, const DenseMatrix& y) { return (x - y).max_abs(); }

}  // namespace eigcount::testing
