#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "eigcount/counter.hpp"
#include "eigcount/eigensolver.hpp"

namespace eigcount {

inline constexpr const char* report_schema_version = "1";

using ordered_json = nlohmann::ordered_json;

inline ordered_json to_json(cplx v) { return ordered_json::array({v.real(), v.imag()}); }

inline ordered_json to_json(const std::vector<cplx>& vs) {
  ordered_json out = ordered_json::array();
  for (const auto& v : vs) out.push_back(to_json(v));
  return out;
}

inline std::vector<std::string> warnings_of(const CountReport& r) {
  std::vector<std::string> out;
  char buf[160];
  for (const auto& v : r.boundary_warnings) {
    std::snprintf(buf, sizeof buf, "boundary: eigenvalue of M with real part %.17g is within the band around 1/2",
                  v.real());
    out.emplace_back(buf);
  }
  for (const auto j : r.near_singular_nodes)
    out.push_back("near-singular factorization at quadrature node j=" + std::to_string(j + 1));
  return out;
}

struct ReportOptions {
  bool timings = false;
  std::size_t threads = 1;
};

inline ordered_json config_json(const CountReport& r, const CountConfig& cfg, const ReportOptions& opt) {
  ordered_json c;
  c["center"] = to_json(r.disk.center);
  c["radius"] = r.disk.radius;
  c["q"] = r.q;
  c["p"] = cfg.search.samples;
  c["alpha"] = cfg.search.growth;
  c["seed"] = r.seed;
  c["max_rounds"] = cfg.search.max_rounds;
  if (cfg.search.rank_tol) c["rank_tol"] = *cfg.search.rank_tol;
  c["boundary_band"] = cfg.boundary_band;
  c["conjugate_symmetry"] = cfg.search.projector.conjugate_symmetry;
  c["threads"] = opt.threads;
  return c;
}

/// {schema_version, kind, s, s0, s1, mu_eigs, warnings, config[, timings]}.
inline ordered_json count_report_json(const CountReport& r, const CountConfig& cfg, const ReportOptions& opt = {}) {
  ordered_json j;
  j["schema_version"] = report_schema_version;
  j["kind"] = "count";
  j["s"] = r.s;
  j["s0"] = r.s0;
  j["s1"] = r.s1;
  j["trace"] = to_json(cplx{r.trace_real, r.trace_imag});
  j["rounds"] = r.rounds;
  j["total_solves"] = r.total_solves;
  j["mu_eigs"] = to_json(r.mu_eigs);
  j["warnings"] = warnings_of(r);
  j["config"] = config_json(r, cfg, opt);
  if (opt.timings)
    j["timings"] = {{"factorize_ms", r.timings.factorize_ms},
                    {"solve_ms", r.timings.solve_ms},
                    {"total_ms", r.timings.total_ms}};
  return j;
}

inline ordered_json eigs_report_json(const EigenpairSet& e, const EigsConfig& cfg, const ReportOptions& opt = {}) {
  ordered_json j = count_report_json(e.count, cfg.count, opt);
  j["kind"] = "eigs";
  ordered_json timings;
  if (opt.timings) {
    timings = j["timings"];
    j.erase("timings");
  }
  j["config"]["tol"] = cfg.tol;
  j["config"]["max_iter"] = cfg.max_iter;
  j["converged"] = e.converged;
  j["iterations"] = e.iterations;
  ordered_json pairs = ordered_json::array();
  for (std::size_t i = 0; i < e.values.size(); ++i)
    pairs.push_back({{"lambda", to_json(e.values[i])}, {"residual", e.residuals[i]}});
  j["eigenpairs"] = pairs;
  if (opt.timings) j["timings"] = timings;
  return j;
}

}  // namespace eigcount
