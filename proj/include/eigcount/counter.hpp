#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "eigcount/eig.hpp"
#include "eigcount/errors.hpp"
#include "eigcount/matrix.hpp"
#include "eigcount/projector.hpp"
#include "eigcount/quadrature.hpp"
#include "eigcount/search.hpp"

namespace eigcount {

inline constexpr double default_boundary_band = 0.01;

struct CountConfig {
  SearchConfig search;
  /// Eigenvalues of M with |Re - 1/2| <= band are reported as boundary warnings.
  double boundary_band = default_boundary_band;
};

struct Timings {
  double factorize_ms = 0.0;
  double solve_ms = 0.0;
  double total_ms = 0.0;
};

struct CountReport {
  std::size_t s = 0;
  long s0 = 0;
  std::size_t s1 = 0;
  double trace_real = 0.0;
  double trace_imag = 0.0;
  std::size_t rounds = 0;
  std::size_t total_solves = 0;
  /// Eigenvalues of M sorted by descending real part.
  std::vector<cplx> mu_eigs;
  std::vector<cplx> boundary_warnings;
  std::vector<std::size_t> near_singular_nodes;
  std::size_t q = 0;
  std::uint64_t seed = 0;
  Disk disk;
  Timings timings;

  /// U1 and U2~ = Q~ U1, kept for the eigensolver.
  DenseMatrix basis;
  DenseMatrix filtered_basis;
};

/// M = U1* U2~.
inline DenseMatrix build_m(const DenseMatrix& basis, const DenseMatrix& filtered) {
  if (basis.rows() != filtered.rows() || basis.cols() != filtered.cols())
    throw ShapeError("build_m: U1 and U2~ differ in shape");
  return adjoint_times(basis, filtered);
}

/// Counts eigenvalues of M with real part strictly above 1/2; fills mu_eigs and warnings.
inline void classify_m(const DenseMatrix& m, double band, CountReport& report) {
  std::vector<cplx> mu = m.rows() ? eig_dense(m).values : std::vector<cplx>{};
  std::sort(mu.begin(), mu.end(), [](cplx a, cplx b) { return a.real() > b.real(); });
  report.s = static_cast<std::size_t>(std::count_if(mu.begin(), mu.end(), [](cplx v) { return v.real() > 0.5; }));
  report.boundary_warnings.clear();
  for (const auto& v : mu)
    if (std::abs(v.real() - 0.5) <= band) report.boundary_warnings.push_back(v);
  report.mu_eigs = std::move(mu);
}

/// Counts the eigenvalues inside the rule's circle with precomputed node factors.
inline CountReport count_eigs(const NodeFactorizations& facts, const Pencil& pencil, const CountConfig& config) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();

  SearchResult sr = search(facts, pencil, config.search);
  CountReport rep;
  rep.s0 = sr.s0;
  rep.s1 = sr.s1;
  rep.trace_real = sr.trace_real;
  rep.trace_imag = sr.trace_imag;
  rep.rounds = sr.rounds;
  rep.q = facts.size();
  rep.seed = config.search.seed;
  rep.disk = facts.rule().disk;
  rep.near_singular_nodes = facts.near_singular_nodes();

  if (sr.s1 > 0) {
    rep.filtered_basis = apply_filtered(facts, pencil, sr.basis);
    rep.total_solves = sr.total_solves + sr.s1 * facts.size();
    classify_m(build_m(sr.basis, rep.filtered_basis), config.boundary_band, rep);
  } else {
    rep.total_solves = sr.total_solves;
    rep.filtered_basis = DenseMatrix(pencil.size(), 0);
  }
  rep.basis = std::move(sr.basis);
  rep.timings.solve_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  rep.timings.total_ms = rep.timings.solve_ms;
  return rep;
}

inline CountReport count_eigs(const Pencil& pencil, const Disk& disk, const CountConfig& config) {
  using clock = std::chrono::steady_clock;
  config.search.validate(pencil.size());
  const auto t0 = clock::now();
  const NodeFactorizations facts =
      factorize_nodes(pencil, make_contour_rule(config.search.nodes, disk), config.search.projector);
  const auto t1 = clock::now();
  CountReport rep = count_eigs(facts, pencil, config);
  rep.timings.factorize_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  rep.timings.total_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  return rep;
}

}  // namespace eigcount
