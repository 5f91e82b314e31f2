#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>

#include "eigcount/errors.hpp"
#include "eigcount/matrix.hpp"
#include "eigcount/projector.hpp"
#include "eigcount/qr.hpp"
#include "eigcount/quadrature.hpp"

namespace eigcount {

struct SearchConfig {
  /// Block growth factor alpha > 1.
  double growth = 1.5;
  /// Initial number of sample vectors p.
  std::size_t samples = 10;
  /// Quadrature node count q.
  std::size_t nodes = 16;
  std::uint64_t seed = 0;
  /// Relative RRQR tolerance; default is 16 eps max(n, cols).
  std::optional<double> rank_tol;
  std::size_t max_rounds = 8;
  /// Upper cap on the block width s* (0 means n).
  std::size_t max_block = 0;
  /// Return the last round's result instead of throwing MaxRoundsExceeded.
  bool partial_on_max_rounds = false;
  ProjectorOptions projector;

  void validate(std::size_t n) const {
    if (!(growth > 1.0) || !std::isfinite(growth)) throw std::invalid_argument("growth factor must exceed 1");
    if (samples < 1 || samples > n) throw std::invalid_argument("sample count p must lie in [1, n]");
    if (max_rounds < 1) throw std::invalid_argument("max_rounds must be at least 1");
    if (nodes < 1 || nodes > max_quadrature_nodes) throw std::invalid_argument("q must lie in [1, 512]");
    if (rank_tol && !(*rank_tol >= 0.0)) throw std::invalid_argument("rank tolerance must be non-negative");
    if (max_block != 0 && max_block < samples) throw std::invalid_argument("max_block must be at least p");
  }
};

struct SearchResult {
  DenseMatrix basis;  // U1, n x s1, orthonormal
  std::size_t s1 = 0;
  long s0 = 0;
  /// (1/p) trace(Y* U) before rounding, and its imaginary part.
  double trace_real = 0.0;
  double trace_imag = 0.0;
  std::size_t rounds = 0;
  /// Right-hand-side columns pushed through the filter (each is q node solves).
  std::size_t filtered_columns = 0;
  std::size_t total_solves = 0;
  /// Width s* of the block handed to the final RRQR.
  std::size_t final_block = 0;
};

class MaxRoundsExceeded : public Error {
public:
  explicit MaxRoundsExceeded(SearchResult partial)
      : Error("search: block kept full rank through max_rounds"), partial_(std::move(partial)) {}
  const SearchResult& partial() const noexcept { return partial_; }

private:
  SearchResult partial_;
};

/// n x m block of i.i.d. N(0, 1) reals (stored complex), drawn column by column.
inline DenseMatrix sample_gaussian(std::size_t n, std::size_t m, std::mt19937_64& rng) {
  if (m < 1) throw std::invalid_argument("sample_gaussian: need at least one column");
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseMatrix y(n, m);
  for (auto& v : y.data()) v = normal(rng);
  return y;
}

inline DenseMatrix sample_gaussian(std::size_t n, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_gaussian(n, m, rng);
}

struct TraceEstimate {
  long s0 = 0;
  double real = 0.0;
  double imag = 0.0;
};

/// s0 = ceil((1/p) Re trace(Y* U)), floored at zero.
inline TraceEstimate trace_estimate(const DenseMatrix& y, const DenseMatrix& u) {
  if (y.rows() != u.rows() || y.cols() != u.cols() || y.cols() == 0)
    throw ShapeError("trace_estimate: shapes differ");
  cplx tr{};
  for (std::size_t j = 0; j < y.cols(); ++j) tr += dot(y.col(j), u.col(j));
  tr /= static_cast<double>(y.cols());
  TraceEstimate t;
  t.real = tr.real();
  t.imag = tr.imag();
  t.s0 = std::max(0L, static_cast<long>(std::ceil(t.real)));
  return t;
}

/// Randomized search for an upper bound s1 of the eigenvalue count and an
/// orthonormal basis U1 whose span contains the wanted eigenspace.
inline SearchResult search(const NodeFactorizations& facts, const Pencil& pencil, const SearchConfig& config) {
  const std::size_t n = pencil.size();
  config.validate(n);
  std::mt19937_64 rng(config.seed);
  const std::size_t q = facts.size();
  const std::size_t cap = config.max_block == 0 ? n : std::min(config.max_block, n);

  SearchResult res;
  std::size_t p = config.samples;
  const DenseMatrix y = sample_gaussian(n, p, rng);
  DenseMatrix u = apply_filtered(facts, pencil, y);
  res.filtered_columns += p;

  const TraceEstimate tr = trace_estimate(y, u);
  res.s0 = tr.s0;
  res.trace_real = tr.real;
  res.trace_imag = tr.imag;
  std::size_t target = std::min(std::max<std::size_t>(p, static_cast<std::size_t>(tr.s0)), cap);

  while (true) {
    ++res.rounds;
    if (target > p) {
      const DenseMatrix extra = sample_gaussian(n, target - p, rng);
      u = u.hcat(apply_filtered(facts, pencil, extra));
      res.filtered_columns += target - p;
    } else {
      target = p;
    }
    RRQRFactors qr = qr_column_pivoted(u, config.rank_tol);
    res.s1 = qr.rank;
    res.basis = std::move(qr.q1);
    res.final_block = target;
    res.total_solves = res.filtered_columns * q;

    // a full-rank block at the width cap cannot grow further
    if (res.s1 < target || res.s1 == cap) break;
    if (res.rounds >= config.max_rounds) {
      if (config.partial_on_max_rounds) break;
      throw MaxRoundsExceeded(std::move(res));
    }
    p = res.s1;
    target = std::min(static_cast<std::size_t>(std::ceil(config.growth * static_cast<double>(res.s1))), cap);
  }
  return res;
}

inline SearchResult search(const Pencil& pencil, const Disk& disk, const SearchConfig& config) {
  config.validate(pencil.size());
  const NodeFactorizations facts = factorize_nodes(pencil, make_contour_rule(config.nodes, disk), config.projector);
  return search(facts, pencil, config);
}

}  // namespace eigcount
