#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <random>
#include <vector>

#include "eigcount/counter.hpp"
#include "eigcount/oracle.hpp"
#include "eigcount/projector.hpp"
#include "eigcount/quadrature.hpp"

namespace eigcount::oracle {

/// Diagonal-versus-counting-matrix comparison on A = S Lambda S^{-1}, B = I with
/// Lambda = diag(0.1, ..., 0.8), circle |z| = 0.401, q = 32, p = 6 and one search round.
struct SmallDiagonalExperiment {
  std::vector<cplx> lambdas;
  std::vector<cplx> d;        // D_ii in the order of lambdas
  std::vector<cplx> mu_eigs;  // eigenvalues of M, descending real part
  std::size_t count = 0;
  std::size_t exact = 0;
  std::size_t s1 = 0;
  long s0 = 0;
};

inline constexpr double small_experiment_radius = 0.401;
inline constexpr std::size_t small_experiment_nodes = 32;
inline constexpr std::size_t small_experiment_samples = 6;

inline SmallDiagonalExperiment run_small_diagonal_experiment(std::uint64_t seed, std::size_t threads = 1,
                                                             std::size_t nodes = small_experiment_nodes) {
  SmallDiagonalExperiment out;
  for (int i = 1; i <= 8; ++i) out.lambdas.push_back(0.1 * i);
  std::mt19937_64 rng(seed);
  const DenseMatrix s = randn(8, 8, rng);
  const DenseMatrix a = similar_to_diagonal(s, out.lambdas);
  const Pencil pencil = Pencil::from_dense(a, DenseMatrix::identity(8));
  const Disk disk({0.0, 0.0}, small_experiment_radius);
  const ContourRule rule = make_contour_rule(nodes, disk);

  out.d = diagonal_filter(out.lambdas, rule).diag;

  CountConfig cfg;
  cfg.search.nodes = nodes;
  cfg.search.samples = small_experiment_samples;
  cfg.search.seed = seed ^ 0x9e3779b97f4a7c15ULL;
  cfg.search.max_rounds = 1;
  cfg.search.partial_on_max_rounds = true;
  cfg.search.max_block = small_experiment_samples;
  // keep all six filtered directions, M is 6 x 6 even when S is poorly conditioned
  cfg.search.rank_tol = 0.0;
  cfg.search.projector.threads = threads;
  const CountReport rep = count_eigs(pencil, disk, cfg);
  out.mu_eigs = rep.mu_eigs;
  out.count = rep.s;
  out.s1 = rep.s1;
  out.s0 = rep.s0;
  SpectrumOracle spec;
  spec.finite = out.lambdas;
  out.exact = exact_count(spec, disk, 0.0).count;
  return out;
}

inline void write_text(std::ostream& os, const SmallDiagonalExperiment& e) {
  char buf[128];
  os << " i  Re(D_ii)              Re(eig(M))\n";
  for (std::size_t i = 0; i < e.d.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%2zu  %20.15f  ", i + 1, e.d[i].real());
    os << buf;
    if (i < e.mu_eigs.size()) {
      std::snprintf(buf, sizeof buf, "%20.15f", e.mu_eigs[i].real());
      os << buf;
    }
    os << '\n';
  }
  os << "s1 = " << e.s1 << ", s0 = " << e.s0 << "\n";
  os << "count = " << e.count << " (exact " << e.exact << ")\n";
}

inline void write_csv(std::ostream& os, const SmallDiagonalExperiment& e) {
  char buf[128];
  os << "i,re_d,re_eig_m\n";
  for (std::size_t i = 0; i < e.d.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,", i + 1, e.d[i].real());
    os << buf;
    if (i < e.mu_eigs.size()) {
      std::snprintf(buf, sizeof buf, "%.17g", e.mu_eigs[i].real());
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace eigcount::oracle
