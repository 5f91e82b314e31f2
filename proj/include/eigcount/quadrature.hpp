#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "eigcount/errors.hpp"

namespace eigcount {

/// Circle |z - center| = radius; the counting region is its interior.
struct Disk {
  cplx center{};
  double radius = 1.0;

  Disk() = default;
  Disk(cplx c, double r) : center(c), radius(r) {
    if (!(r > 0.0) || !std::isfinite(r) || !is_finite_point(c))
      throw std::invalid_argument("Disk: radius must be positive and finite");
  }

  bool contains(cplx mu) const { return std::abs(mu - center) < radius; }

private:
  static bool is_finite_point(cplx c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }
};

struct GaussLegendre {
  std::vector<double> nodes;    // strictly increasing in (-1, 1)
  std::vector<double> weights;  // positive, summing to 2
};

inline constexpr std::size_t max_quadrature_nodes = 512;

namespace detail {

/// P_q(x) and P_q'(x) by the three-term recurrence.
inline std::pair<double, double> legendre(std::size_t q, double x) {
  double p0 = 1.0, p1 = x;
  if (q == 0) return {1.0, 0.0};
  for (std::size_t k = 2; k <= q; ++k) {
    const double kk = static_cast<double>(k);
    const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
    p0 = p1;
    p1 = p2;
  }
  const double dp = static_cast<double>(q) * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

}  // namespace detail

/// Gauss-Legendre rule on [-1, 1]: Newton iteration on P_q from Chebyshev-like guesses.
inline GaussLegendre gauss_legendre(std::size_t q) {
  if (q < 1 || q > max_quadrature_nodes)
    throw std::invalid_argument("gauss_legendre: node count must lie in [1, 512]");
  GaussLegendre rule;
  rule.nodes.resize(q);
  rule.weights.resize(q);
  const std::size_t half = (q + 1) / 2;
  const double qd = static_cast<double>(q);
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (qd + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = detail::legendre(q, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-15) break;
    }
    // the odd middle node is exactly zero
    if (2 * i + 1 == q) x = 0.0;
    const auto [p, dp] = detail::legendre(q, x);
    (void)p;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // x descends from near +1; store ascending
    rule.nodes[q - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[q - 1 - i] = w;
    rule.weights[i] = w;
  }
  return rule;
}

/// Gauss-Legendre nodes mapped onto the circle: theta_j = (1 + t_j) pi, z_j = c + rho e^{i theta_j}.
struct ContourRule {
  Disk disk;
  std::vector<double> t;
  std::vector<double> weights;
  std::vector<double> theta;
  std::vector<cplx> z;

  std::size_t size() const noexcept { return z.size(); }

  /// omega_j (z_j - c) / 2: the scalar multiplying node j's resolvent.
  cplx node_scale(std::size_t j) const { return 0.5 * weights[j] * (z[j] - disk.center); }
};

inline ContourRule map_to_circle(const GaussLegendre& rule, const Disk& disk) {
  ContourRule out;
  out.disk = disk;
  out.t = rule.nodes;
  out.weights = rule.weights;
  const std::size_t q = rule.nodes.size();
  out.theta.resize(q);
  out.z.resize(q);
  for (std::size_t j = 0; j < q; ++j) {
    out.theta[j] = (1.0 + rule.nodes[j]) * std::numbers::pi;
    out.z[j] = disk.center + disk.radius * std::polar(1.0, out.theta[j]);
  }
  return out;
}

inline ContourRule make_contour_rule(std::size_t q, const Disk& disk) {
  return map_to_circle(gauss_legendre(q), disk);
}

struct FilterValue {
  cplx value{};
  double real_part = 0.0;
  /// g_j(r, theta) per node; Re psi = (1/2) sum_j w_j g_j.
  std::vector<double> terms;
};

inline constexpr double node_collision_tol = 1e-14;

/// psi(mu) = (1/2) sum_j w_j (z_j - c) / (z_j - mu): the quadrature approximation of
/// the indicator of the disk. Re psi > 1/2 strictly inside, < 1/2 strictly outside.
inline FilterValue filter_value(const ContourRule& rule, cplx mu, bool with_terms = false) {
  const Disk& d = rule.disk;
  FilterValue out;
  for (std::size_t j = 0; j < rule.size(); ++j) {
    const cplx gap = rule.z[j] - mu;
    if (std::abs(gap) <= node_collision_tol * d.radius) throw NodeCollision(j, rule.z[j]);
    out.value += rule.weights[j] * ((rule.z[j] - d.center) / gap);
  }
  out.value *= 0.5;
  out.real_part = out.value.real();
  if (with_terms) {
    const double rho = d.radius;
    const double r = std::abs(mu - d.center);
    const double th = std::arg(mu - d.center);
    out.terms.resize(rule.size());
    for (std::size_t j = 0; j < rule.size(); ++j) {
      const double cs = std::cos(rule.t[j] * std::numbers::pi - th);
      out.terms[j] = (rho * rho + rho * r * cs) / (rho * rho + r * r + 2.0 * rho * r * cs);
    }
  }
  return out;
}

struct ProfileSample {
  double r;
  double theta;
  double re_psi;
};

/// Samples Re psi on a polar grid r in [0, r_max] (n_radii points) times
/// theta in (-pi, pi] (n_angles points). Grid points on a node are skipped.
inline std::vector<ProfileSample> filter_profile(const ContourRule& rule, double r_max, std::size_t n_radii,
                                                 std::size_t n_angles) {
  if (!(r_max > 0.0) || n_radii < 2 || n_angles < 1)
    throw std::invalid_argument("filter_profile: need r_max > 0, at least 2 radii and 1 angle");
  std::vector<ProfileSample> out;
  out.reserve(n_radii * n_angles);
  const double pi = std::numbers::pi;
  for (std::size_t a = 0; a < n_radii; ++a) {
    const double r = r_max * static_cast<double>(a) / static_cast<double>(n_radii - 1);
    for (std::size_t b = 0; b < n_angles; ++b) {
      const double th = -pi + 2.0 * pi * static_cast<double>(b + 1) / static_cast<double>(n_angles);
      const cplx mu = rule.disk.center + std::polar(r, th);
      try {
        out.push_back({r, th, filter_value(rule, mu).real_part});
      } catch (const NodeCollision&) {
      }
    }
  }
  return out;
}

/// CSV with header `r,theta,re_psi`, 17 significant digits.
inline void write_profile_csv(std::ostream& os, const std::vector<ProfileSample>& rows) {
  os << "r,theta,re_psi\n";
  char buf[96];
  for (const auto& s : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", s.r, s.theta, s.re_psi);
    os << buf;
  }
}

}  // namespace eigcount
