#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "eigcount/errors.hpp"
#include "eigcount/lu.hpp"
#include "eigcount/matrix.hpp"
#include "eigcount/parallel.hpp"
#include "eigcount/quadrature.hpp"

namespace eigcount {

inline constexpr std::size_t default_dense_cap = 4096;

/// The pair (A, B) of A x = lambda B x. Both are kept sparse; dense shifted
/// matrices are assembled per quadrature node.
class Pencil {
public:
  Pencil(SparseMatrix a, SparseMatrix b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_.rows() != a_.cols()) throw ShapeError("Pencil: A is not square");
    if (b_.rows() != a_.rows() || b_.cols() != a_.cols())
      throw ShapeError("Pencil: A and B differ in dimension");
  }

  /// Standard problem A x = lambda x.
  static Pencil standard(SparseMatrix a) {
    const std::size_t n = a.rows();
    return Pencil(std::move(a), SparseMatrix::identity(n));
  }

  static Pencil from_dense(const DenseMatrix& a, const DenseMatrix& b) {
    return Pencil(SparseMatrix::from_dense(a), SparseMatrix::from_dense(b));
  }

  std::size_t size() const noexcept { return a_.rows(); }
  const SparseMatrix& a() const noexcept { return a_; }
  const SparseMatrix& b() const noexcept { return b_; }
  bool is_real() const { return a_.is_real() && b_.is_real(); }

  /// Dense z B - A.
  DenseMatrix shifted(cplx z) const {
    DenseMatrix m(size(), size());
    for (const auto& t : b_.entries()) m(t.row, t.col) += z * t.value;
    for (const auto& t : a_.entries()) m(t.row, t.col) -= t.value;
    return m;
  }

  /// Same eigenvalues, both matrices multiplied by gamma.
  Pencil scaled(cplx gamma) const { return Pencil(a_.scaled(gamma), b_.scaled(gamma)); }

private:
  SparseMatrix a_;
  SparseMatrix b_;
};

struct ProjectorOptions {
  std::size_t threads = 1;
  /// For real pencils with a real center, factor only one node of each conjugate
  /// pair and solve the mirrored node through conjugation. Changes rounding.
  bool conjugate_symmetry = false;
  std::size_t dense_cap = default_dense_cap;
};

/// Per-node LU factors of z_j B - A, reused by every application of the filter.
class NodeFactorizations {
public:
  const ContourRule& rule() const noexcept { return rule_; }
  std::size_t size() const noexcept { return rule_.size(); }
  std::size_t dimension() const noexcept { return n_; }
  const ProjectorOptions& options() const noexcept { return options_; }

  /// Factor used for node j (for a mirrored node this is its partner's factor).
  const LUFactors& factor(std::size_t j) const { return factors_[source_[j]]; }
  bool mirrored(std::size_t j) const noexcept { return mirrored_[j]; }
  bool uses_conjugate_symmetry() const noexcept { return symmetric_; }
  std::size_t factorization_count() const noexcept { return factors_.size(); }

  /// Zero-based indices of nodes whose factorization hit a tiny pivot.
  std::vector<std::size_t> near_singular_nodes() const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < size(); ++j)
      if (factor(j).near_singular) out.push_back(j);
    return out;
  }

  friend NodeFactorizations factorize_nodes(const Pencil&, const ContourRule&, const ProjectorOptions&);

private:
  ContourRule rule_;
  ProjectorOptions options_;
  std::size_t n_ = 0;
  bool symmetric_ = false;
  std::vector<LUFactors> factors_;
  std::vector<std::size_t> source_;
  std::vector<bool> mirrored_;
};

/// LU-factors z_j B - A for every node, independently and in parallel.
/// Throws NodeSingular for the first singular node, AllNodesSingular if none factor.
inline NodeFactorizations factorize_nodes(const Pencil& pencil, const ContourRule& rule,
                                          const ProjectorOptions& options = {}) {
  const std::size_t n = pencil.size();
  if (n > options.dense_cap) throw DenseCapExceeded(n, options.dense_cap);
  const std::size_t q = rule.size();

  NodeFactorizations out;
  out.rule_ = rule;
  out.options_ = options;
  out.n_ = n;
  out.symmetric_ = options.conjugate_symmetry && pencil.is_real() && rule.disk.center.imag() == 0.0;
  out.source_.resize(q);
  out.mirrored_.assign(q, false);

  // node j and q-1-j are complex conjugates when the center is real
  const std::size_t factored = out.symmetric_ ? (q + 1) / 2 : q;
  for (std::size_t j = 0; j < q; ++j) {
    if (j < factored) {
      out.source_[j] = j;
    } else {
      out.source_[j] = q - 1 - j;
      out.mirrored_[j] = true;
    }
  }

  std::vector<std::optional<LUFactors>> slots(factored);
  parallel_for(factored, options.threads, [&](std::size_t j) {
    try {
      slots[j] = lu_factor(pencil.shifted(rule.z[j]));
    } catch (const SingularMatrix&) {
    }
  });

  std::size_t failures = 0;
  std::optional<std::size_t> first_failure;
  for (std::size_t j = 0; j < factored; ++j)
    if (!slots[j]) {
      ++failures;
      if (!first_failure) first_failure = j;
    }
  if (failures == factored) throw AllNodesSingular();
  if (first_failure) throw NodeSingular(*first_failure, rule.z[*first_failure]);

  out.factors_.reserve(factored);
  for (auto& s : slots) out.factors_.push_back(std::move(*s));
  return out;
}

/// Q~ Y = (1/2) sum_j w_j (z_j - c) (z_j B - A)^{-1} B Y.
///
/// B Y is formed once. Node solves run in parallel into separate buffers and
/// are summed in ascending j afterwards, so any thread count gives the same bits.
inline DenseMatrix apply_filtered(const NodeFactorizations& facts, const Pencil& pencil, const DenseMatrix& y) {
  if (y.rows() != pencil.size() || facts.dimension() != pencil.size())
    throw ShapeError("apply_filtered: dimension mismatch");
  if (y.cols() == 0) throw ShapeError("apply_filtered: empty block");
  const DenseMatrix by = pencil.b().multiply(y);
  const ContourRule& rule = facts.rule();
  const std::size_t q = rule.size();

  std::optional<DenseMatrix> by_conj;
  if (facts.uses_conjugate_symmetry()) by_conj = by.conj();

  auto node_term = [&](std::size_t j) {
    DenseMatrix x = facts.mirrored(j) ? lu_solve(facts.factor(j), *by_conj).conj()
                                      : lu_solve(facts.factor(j), by);
    x *= rule.node_scale(j);
    return x;
  };

  if (facts.options().threads <= 1) {
    DenseMatrix sum = node_term(0);
    for (std::size_t j = 1; j < q; ++j) sum += node_term(j);
    return sum;
  }

  std::vector<DenseMatrix> parts(q);
  parallel_for(q, facts.options().threads, [&](std::size_t j) { parts[j] = node_term(j); });

  DenseMatrix sum = std::move(parts[0]);
  for (std::size_t j = 1; j < q; ++j) sum += parts[j];
  return sum;
}

}  // namespace eigcount
