#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "eigcount/counter.hpp"
#include "eigcount/eig.hpp"
#include "eigcount/errors.hpp"
#include "eigcount/lu.hpp"
#include "eigcount/matrix.hpp"
#include "eigcount/projector.hpp"
#include "eigcount/qr.hpp"

namespace eigcount {

struct EigsConfig {
  CountConfig count;
  /// Relative residual tolerance epsilon.
  double tol = 1e-10;
  /// Largest iteration index k; the loop starts at k = 2, so 1 runs no refinement.
  std::size_t max_iter = 20;
  /// Largest accepted 1-norm condition estimate of the projected B.
  double cond_cap = 1e12;

  void validate() const {
    if (!(tol > 0.0)) throw std::invalid_argument("residual tolerance must be positive");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
    if (!(cond_cap > 1.0)) throw std::invalid_argument("condition cap must exceed 1");
  }
};

struct EigenpairSet {
  std::vector<cplx> values;
  DenseMatrix vectors;  // unit 2-norm columns
  std::vector<double> residuals;
  /// Index k of the last projected solve (0 when none ran).
  std::size_t iterations = 0;
  bool converged = false;
  /// Median residual of the s best in-disk candidates, per iteration.
  std::vector<double> residual_history;
  CountReport count;
};

/// ||A x - lambda B x|| / (||A x|| + ||B x||); invariant under scaling of x.
inline double residual(const Pencil& pencil, cplx lambda, std::span<const cplx> x) {
  if (x.size() != pencil.size()) throw ShapeError("residual: vector length differs from pencil size");
  DenseMatrix xv(x.size(), 1, std::vector<cplx>(x.begin(), x.end()));
  const DenseMatrix ax = pencil.a().multiply(xv);
  const DenseMatrix bx = pencil.b().multiply(xv);
  const double den = norm2(ax.col(0)) + norm2(bx.col(0));
  if (den == 0.0) throw DegenerateVector();
  DenseMatrix r = ax;
  for (std::size_t i = 0; i < x.size(); ++i) r(i, 0) -= lambda * bx(i, 0);
  return norm2(r.col(0)) / den;
}

namespace detail {

inline double condition_1norm(const DenseMatrix& m, const LUFactors& f) {
  return m.norm1() * lu_inverse(f).norm1();
}

}  // namespace detail

/// Subspace iteration with the eigenvalue count as stopping rule. Each step
/// orthonormalizes U_k and B U_k, solves the projected pencil, lifts the Ritz
/// vectors and accepts in-disk pairs whose relative residual is below tol.
inline EigenpairSet refine_eigenpairs(const NodeFactorizations& facts, const Pencil& pencil,
                                      const EigsConfig& config) {
  config.validate();
  EigenpairSet out;
  out.count = count_eigs(facts, pencil, config.count);
  const std::size_t n = pencil.size();
  const std::size_t s = out.count.s;
  const Disk disk = facts.rule().disk;
  out.vectors = DenseMatrix(n, 0);
  if (s == 0) {
    out.converged = true;
    return out;
  }

  DenseMatrix uk = out.count.filtered_basis;
  for (std::size_t k = 2; k <= config.max_iter; ++k) {
    out.iterations = k;
    const DenseMatrix u1 = qr_thin(uk).q;
    const DenseMatrix u2 = qr_thin(pencil.b().multiply(uk)).q;
    const DenseMatrix a_proj = adjoint_times(u2, pencil.a().multiply(u1));
    const DenseMatrix b_proj = adjoint_times(u2, pencil.b().multiply(u1));

    LUFactors bf;
    try {
      bf = lu_factor(b_proj);
    } catch (const SingularMatrix&) {
      throw IllConditionedProjection(std::numeric_limits<double>::infinity());
    }
    const double cond = detail::condition_1norm(b_proj, bf);
    if (!(cond <= config.cond_cap)) throw IllConditionedProjection(cond);

    const DenseEigen ritz = eig_dense(lu_solve(bf, a_proj), true);
    const DenseMatrix lifted = u1 * ritz.vectors;

    std::vector<cplx> values;
    std::vector<std::size_t> cols;
    std::vector<double> res;
    std::vector<double> inside_res;
    for (std::size_t i = 0; i < ritz.values.size(); ++i) {
      const cplx lambda = ritz.values[i];
      if (!disk.contains(lambda)) continue;
      std::vector<cplx> x(lifted.col(i).begin(), lifted.col(i).end());
      const double nx = norm2(x);
      if (nx == 0.0) continue;
      for (auto& e : x) e /= nx;
      double r = 0.0;
      try {
        r = residual(pencil, lambda, x);
      } catch (const DegenerateVector&) {
        continue;
      }
      inside_res.push_back(r);
      if (!(r < config.tol)) continue;
      bool duplicate = false;
      for (std::size_t a = 0; a < values.size() && !duplicate; ++a) {
        if (std::abs(values[a] - lambda) > 1e-12 * disk.radius) continue;
        const double align = std::abs(dot(lifted.col(cols[a]), x)) / norm2(lifted.col(cols[a]));
        duplicate = align > 1.0 - 1e-8;
      }
      if (duplicate) continue;
      values.push_back(lambda);
      cols.push_back(i);
      res.push_back(r);
    }

    std::sort(inside_res.begin(), inside_res.end());
    if (!inside_res.empty()) {
      const std::size_t m = std::min(s, inside_res.size());
      out.residual_history.push_back(inside_res[(m - 1) / 2]);
    }

    out.values = values;
    out.residuals = res;
    out.vectors = DenseMatrix(n, values.size());
    for (std::size_t a = 0; a < values.size(); ++a) {
      auto dst = out.vectors.col(a);
      auto src = lifted.col(cols[a]);
      const double nx = norm2(src);
      for (std::size_t i = 0; i < n; ++i) dst[i] = src[i] / nx;
    }

    if (values.size() == s) {
      out.converged = true;
      break;
    }
    if (k == config.max_iter) break;
    uk = apply_filtered(facts, pencil, u1);
  }
  return out;
}

inline EigenpairSet refine_eigenpairs(const Pencil& pencil, const Disk& disk, const EigsConfig& config) {
  config.validate();
  const auto& sc = config.count.search;
  sc.validate(pencil.size());
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  const NodeFactorizations facts = factorize_nodes(pencil, make_contour_rule(sc.nodes, disk), sc.projector);
  const auto t1 = clock::now();
  EigenpairSet out = refine_eigenpairs(facts, pencil, config);
  out.count.timings.factorize_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  out.count.timings.total_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  out.count.timings.solve_ms = out.count.timings.total_ms - out.count.timings.factorize_ms;
  return out;
}

}  // namespace eigcount
