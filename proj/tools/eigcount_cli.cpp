// eigcount: count and compute the eigenvalues of A x = lambda B x inside a disk.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "eigcount/eigcount.hpp"
#include "eigcount/experiment.hpp"
#include "eigcount/report.hpp"

using namespace eigcount;

namespace {

enum ExitCode { ok = 0, usage = 2, input = 3, numerical = 4, not_converged = 5 };

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class InputError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_real(const std::string& s, const std::string& whole) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || ptr != end) throw UsageError("bad complex number '" + whole + "'");
  return v;
}

// Accepts "a", "bi", "a+bi", "a-bi" with optional scientific notation.
cplx parse_complex(std::string s) {
  const std::string whole = s;
  std::erase(s, ' ');
  if (s.empty()) throw UsageError("empty complex number");
  if (s.back() != 'i' && s.back() != 'j') return {parse_real(s[0] == '+' ? s.substr(1) : s, whole), 0.0};
  s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;)
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  const auto imag_of = [&](std::string t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    if (t[0] == '+') t.erase(0, 1);
    return parse_real(t, whole);
  };
  if (split == std::string::npos) return {0.0, imag_of(s)};
  const std::string re = s.substr(0, split);
  return {parse_real(re[0] == '+' ? re.substr(1) : re, whole), imag_of(s.substr(split))};
}

struct Options {
  std::string a_path, b_path, center = "0", output, vectors;
  double radius = 1.0;
  std::size_t q = 16, p = 10, max_rounds = 8, max_iter = 20, threads = default_thread_count();
  std::size_t dense_cap = default_dense_cap;
  double alpha = 1.5, tol = 1e-10, band = default_boundary_band;
  std::optional<double> rank_tol;
  std::uint64_t seed = 0;
  bool timings = false, conjugate = false, verbose = false, csv = false;
  double r_max = 4.0;
  std::size_t radii = 81, angles = 64;
  std::size_t exp_q = oracle::small_experiment_nodes, exp_threads = 1;
};

SparseMatrix load(const std::string& path) {
  if (!std::filesystem::exists(path)) throw InputError("cannot open '" + path + "'");
  return read_matrix_market(std::filesystem::path(path));
}

Pencil load_pencil(const Options& o) {
  SparseMatrix a = load(o.a_path);
  if (o.b_path.empty()) return Pencil::standard(std::move(a));
  SparseMatrix b = load(o.b_path);
  if (b.rows() != a.rows() || b.cols() != a.cols())
    throw InputError("A and B differ in shape");
  return Pencil(std::move(a), std::move(b));
}

void emit(const Options& o, const std::string& text) {
  if (o.output.empty() || o.output == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(o.output, std::ios::binary);
  if (!out) throw InputError("cannot write '" + o.output + "'");
  out << text;
}

CountConfig count_config(const Options& o, std::size_t n) {
  CountConfig cfg;
  cfg.search.growth = o.alpha;
  cfg.search.samples = o.p;
  if (o.p > n) {
    std::cerr << "note: p = " << o.p << " exceeds n = " << n << ", using p = " << n << "\n";
    cfg.search.samples = n;
  }
  cfg.search.nodes = o.q;
  cfg.search.seed = o.seed;
  cfg.search.rank_tol = o.rank_tol;
  cfg.search.max_rounds = o.max_rounds;
  cfg.search.projector.threads = o.threads;
  cfg.search.projector.conjugate_symmetry = o.conjugate;
  cfg.search.projector.dense_cap = o.dense_cap;
  cfg.boundary_band = o.band;
  cfg.search.validate(n);
  return cfg;
}

Disk disk_of(const Options& o) {
  try {
    return Disk(parse_complex(o.center), o.radius);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

void log_warnings(const Options& o, const CountReport& r) {
  for (const auto& w : warnings_of(r)) std::cerr << "warning: " << w << "\n";
  if (o.verbose)
    std::cerr << "s0 = " << r.s0 << ", s1 = " << r.s1 << ", rounds = " << r.rounds << ", solves = " << r.total_solves
              << "\n";
}

int cmd_count(const Options& o) {
  const Pencil pencil = load_pencil(o);
  const CountConfig cfg = count_config(o, pencil.size());
  const CountReport r = count_eigs(pencil, disk_of(o), cfg);
  log_warnings(o, r);
  emit(o, count_report_json(r, cfg, {o.timings, o.threads}).dump(2) + "\n");
  return ok;
}

int cmd_search(const Options& o) {
  const Pencil pencil = load_pencil(o);
  const CountConfig cfg = count_config(o, pencil.size());
  const SearchResult r = search(pencil, disk_of(o), cfg.search);
  ordered_json j;
  j["schema_version"] = report_schema_version;
  j["kind"] = "search";
  j["s0"] = r.s0;
  j["s1"] = r.s1;
  j["trace"] = to_json(cplx{r.trace_real, r.trace_imag});
  j["rounds"] = r.rounds;
  j["final_block"] = r.final_block;
  j["total_solves"] = r.total_solves;
  emit(o, j.dump(2) + "\n");
  return ok;
}

// Sidecar layout: "EIGV" magic, uint64 rows, uint64 cols, then rows*cols
// complex doubles (re, im) in column-major order, native endianness.
void write_vectors(const std::string& path, const DenseMatrix& v) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  const std::uint64_t dims[2] = {v.rows(), v.cols()};
  out.write("EIGV", 4);
  out.write(reinterpret_cast<const char*>(dims), sizeof dims);
  out.write(reinterpret_cast<const char*>(v.data().data()), static_cast<std::streamsize>(v.data().size() * sizeof(cplx)));
}

int cmd_eigs(const Options& o) {
  const Pencil pencil = load_pencil(o);
  EigsConfig cfg;
  cfg.count = count_config(o, pencil.size());
  cfg.tol = o.tol;
  cfg.max_iter = o.max_iter;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const EigenpairSet e = refine_eigenpairs(pencil, disk_of(o), cfg);
  log_warnings(o, e.count);
  emit(o, eigs_report_json(e, cfg, {o.timings, o.threads}).dump(2) + "\n");
  if (!o.vectors.empty()) write_vectors(o.vectors, e.vectors);
  if (!e.converged) {
    std::cerr << "not converged: " << e.values.size() << " of " << e.count.s << " pairs after " << e.iterations
              << " iterations\n";
    return not_converged;
  }
  return ok;
}

int cmd_filter_profile(const Options& o) {
  const auto rule = make_contour_rule(o.q, disk_of(o));
  std::ostringstream ss;
  write_profile_csv(ss, filter_profile(rule, o.r_max, o.radii, o.angles));
  emit(o, ss.str());
  return ok;
}

int cmd_experiment51(const Options& o) {
  const auto e = oracle::run_small_diagonal_experiment(o.seed, o.exp_threads, o.exp_q);
  std::ostringstream ss;
  if (o.csv)
    oracle::write_csv(ss, e);
  else
    oracle::write_text(ss, e);
  emit(o, ss.str());
  return ok;
}

void add_disk(CLI::App* c, Options& o) {
  c->add_option("--center", o.center, "disk center, e.g. -6e5+2e5i")->capture_default_str();
  c->add_option("--radius", o.radius, "disk radius")->capture_default_str()->check(CLI::PositiveNumber);
}

void add_solver(CLI::App* c, Options& o) {
  c->add_option("--a", o.a_path, "Matrix Market file for A")->required();
  c->add_option("--b", o.b_path, "Matrix Market file for B (identity when omitted)");
  add_disk(c, o);
  c->add_option("--q", o.q, "quadrature nodes")->capture_default_str()->check(CLI::Range(1, 512));
  c->add_option("--p", o.p, "initial sample vectors")->capture_default_str()->check(CLI::PositiveNumber);
  c->add_option("--alpha", o.alpha, "block growth factor")->capture_default_str();
  c->add_option("--seed", o.seed, "random seed")->capture_default_str();
  c->add_option("--max-rounds", o.max_rounds, "search round cap")->capture_default_str();
  c->add_option("--rank-tol", o.rank_tol, "relative rank tolerance for the pivoted QR");
  c->add_option("--boundary-band", o.band, "warning band around 1/2")->capture_default_str();
  c->add_option("--dense-cap", o.dense_cap, "largest n for dense factorization")->capture_default_str();
  c->add_option("--threads", o.threads, "worker threads (1 is bit-reproducible)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  c->add_option("--output,-o", o.output, "output file (stdout when omitted)");
  c->add_flag("--timings", o.timings, "include wall-clock timings in the report");
  c->add_flag("--conjugate-symmetry", o.conjugate, "reuse conjugate node factorizations for real pencils");
  c->add_flag("--verbose,-v", o.verbose, "progress on stderr");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Count eigenvalues of A x = lambda B x inside a disk"};
  app.require_subcommand(1);
  Options o;

  auto* count = app.add_subcommand("count", "number of eigenvalues inside the disk (JSON)");
  add_solver(count, o);
  auto* srch = app.add_subcommand("search", "upper bound s1 and trace estimate s0 (JSON)");
  add_solver(srch, o);
  auto* eigs = app.add_subcommand("eigs", "eigenpairs inside the disk (JSON)");
  add_solver(eigs, o);
  eigs->add_option("--tol,--eps", o.tol, "relative residual tolerance")->capture_default_str();
  eigs->add_option("--max-iter", o.max_iter, "iteration cap")->capture_default_str();
  eigs->add_option("--vectors", o.vectors, "binary sidecar for the eigenvectors");

  auto* profile = app.add_subcommand("filter-profile", "Re of the filter function on a polar grid (CSV)");
  add_disk(profile, o);
  profile->add_option("--q", o.q, "quadrature nodes")->capture_default_str()->check(CLI::Range(1, 512));
  profile->add_option("--r-max", o.r_max, "largest radius, in units of the disk radius")->capture_default_str();
  profile->add_option("--radii", o.radii, "radial samples")->capture_default_str();
  profile->add_option("--angles", o.angles, "angular samples")->capture_default_str();
  profile->add_option("--output,-o", o.output, "output file (stdout when omitted)");

  auto* exp = app.add_subcommand("experiment51", "8x8 diagonal filter versus counting matrix table");
  exp->add_option("--seed", o.seed, "seed for S and the sample block")->capture_default_str();
  exp->add_option("--q", o.exp_q, "quadrature nodes")->capture_default_str()->check(CLI::Range(1, 512));
  exp->add_option("--threads", o.exp_threads, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  exp->add_flag("--csv", o.csv, "CSV instead of an aligned table");
  exp->add_option("--output,-o", o.output, "output file (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : usage;
  }

  try {
    if (*count) return cmd_count(o);
    if (*srch) return cmd_search(o);
    if (*eigs) return cmd_eigs(o);
    if (*profile) return cmd_filter_profile(o);
    if (*exp) return cmd_experiment51(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return input;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return input;
  } catch (const UnsupportedFormat& e) {
    std::cerr << "error: " << e.what() << "\n";
    return input;
  } catch (const ShapeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return input;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return numerical;
  }
  return usage;
}
