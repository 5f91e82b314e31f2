#include <catch2/catch_amalgamated.hpp>

#include "eigcount/eigcount.hpp"
#include "eigcount/experiment.hpp"
#include "eigcount/oracle.hpp"
#include "support.hpp"

using namespace eigcount;

namespace {

std::size_t oracle_count(const testing::KnownPencil& k, const Disk& disk) {
  return oracle::exact_count(oracle::dense_generalized_eig(k.a, k.b), disk, 0.0).count;
}

CountConfig config_for(std::size_t n, std::uint64_t seed) {
  CountConfig cfg;
  cfg.search.samples = std::min<std::size_t>(8, n);
  cfg.search.nodes = 32;
  cfg.search.seed = seed;
  cfg.search.max_rounds = 20;
  return cfg;
}

}  // namespace

TEST_CASE("build_m", "[counter]") {
  SECTION("identity basis returns the filtered block") {
    const DenseMatrix f = DenseMatrix::diagonal(std::vector<cplx>{0.9, 0.2, cplx(0.1, 0.3)});
    CHECK(build_m(DenseMatrix::identity(3), f) == f);
  }
  SECTION("exact eigenspace basis returns the filter values") {
    const std::vector<cplx> lam{0.1, 0.2, 3.0, 4.0};
    const Pencil p = Pencil::standard(SparseMatrix::from_dense(DenseMatrix::diagonal(lam)));
    const auto rule = make_contour_rule(32, Disk({0, 0}, 1.0));
    const auto facts = factorize_nodes(p, rule);
    DenseMatrix u(4, 2);
    u(0, 0) = 1.0;
    u(1, 1) = 1.0;
    const DenseMatrix m = build_m(u, apply_filtered(facts, p, u));
    CHECK(std::abs(m(0, 0) - filter_value(rule, 0.1).value) <= 1e-13);
    CHECK(std::abs(m(1, 1) - filter_value(rule, 0.2).value) <= 1e-13);
    CHECK(std::abs(m(0, 1)) == 0.0);
  }
  SECTION("shape mismatch") {
    CHECK_THROWS_AS(build_m(DenseMatrix(4, 2), DenseMatrix(4, 3)), ShapeError);
  }
}

TEST_CASE("classify_m counts strictly above one half", "[counter]") {
  CountReport r;
  classify_m(DenseMatrix::diagonal(std::vector<cplx>{0.5 + 1e-3, 0.5, 0.5 - 1e-3, 0.98, cplx(0.01, 0.2)}), 0.01, r);
  CHECK(r.s == 2);
  CHECK(r.boundary_warnings.size() == 3);
  REQUIRE(r.mu_eigs.size() == 5);
  for (std::size_t i = 1; i < r.mu_eigs.size(); ++i) CHECK(r.mu_eigs[i - 1].real() >= r.mu_eigs[i].real());
  classify_m(DenseMatrix(0, 0), 0.01, r);
  CHECK(r.s == 0);
}

TEST_CASE("count on the 8x8 similarity pencil is 4", "[counter]") {
  for (std::uint64_t seed : {1u, 7u, 2024u}) {
    const auto e = oracle::run_small_diagonal_experiment(seed);
    INFO("seed " << seed);
    CHECK(e.count == 4);
    CHECK(e.exact == 4);
    CHECK(e.mu_eigs.size() == 6);
  }
}

TEST_CASE("count on an empty disk is zero", "[counter]") {
  std::vector<cplx> lam;
  for (int i = 0; i < 20; ++i) lam.push_back(std::polar(3.0 + i, 0.7 * i));
  const Pencil p = Pencil::standard(SparseMatrix::from_dense(DenseMatrix::diagonal(lam)));
  const CountReport r = count_eigs(p, Disk({0, 0}, 1.0), config_for(20, 3));
  CHECK(r.s == 0);
  for (const auto& v : r.mu_eigs) CHECK(v.real() < 0.5);
}

TEST_CASE("count agrees with the QZ oracle on random pencils", "[counter][property]") {
  std::size_t mismatches = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto k = testing::make_pencil(seed, 15, seed % 3 == 0, 0.05);
    const CountReport r = count_eigs(k.pencil, k.disk, config_for(15, seed + 500));
    const std::size_t exact = oracle_count(k, k.disk);
    if (r.s != exact) {
      ++mismatches;
      UNSCOPED_INFO("seed " << seed << ": count " << r.s << " exact " << exact);
    }
  }
  CHECK(mismatches == 0);
}

TEST_CASE("count is invariant under pencil scaling", "[counter][property]") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto k = testing::make_pencil(seed, 12, false, 0.05);
    const auto cfg = config_for(12, seed);
    const std::size_t base = count_eigs(k.pencil, k.disk, cfg).s;
    for (const cplx gamma : {cplx(2.0), cplx(-1.0), cplx(0.0, 1.0)})
      CHECK(count_eigs(k.pencil.scaled(gamma), k.disk, cfg).s == base);
  }
}

TEST_CASE("counts over disjoint disks add up", "[counter][property]") {
  // eigenvalues in two clusters around -2 and +2, plus far-away ones
  std::vector<cplx> lam;
  for (int i = 0; i < 5; ++i) lam.push_back(cplx(-2.0, 0.0) + std::polar(0.4, 1.1 * i));
  for (int i = 0; i < 3; ++i) lam.push_back(cplx(2.0, 0.0) + std::polar(0.3, 2.0 * i));
  for (int i = 0; i < 10; ++i) lam.push_back(std::polar(6.0 + i, 0.9 * i));
  std::mt19937_64 rng(4);
  const DenseMatrix s = oracle::randn(lam.size(), lam.size(), rng);
  const Pencil p = Pencil::from_dense(oracle::similar_to_diagonal(s, lam), DenseMatrix::identity(lam.size()));
  const auto cfg = config_for(lam.size(), 11);
  const std::size_t left = count_eigs(p, Disk({-2.0, 0.0}, 1.0), cfg).s;
  const std::size_t right = count_eigs(p, Disk({2.0, 0.0}, 1.0), cfg).s;
  const std::size_t both = count_eigs(p, Disk({0.0, 0.0}, 3.0), cfg).s;
  CHECK(left == 5);
  CHECK(right == 3);
  CHECK(both == left + right);
}

TEST_CASE("count reports configuration and solve totals", "[counter]") {
  const auto k = testing::make_pencil(9, 10, true, 0.05);
  const auto cfg = config_for(10, 1);
  const CountReport r = count_eigs(k.pencil, k.disk, cfg);
  CHECK(r.q == 32);
  CHECK(r.seed == 1);
  CHECK(r.disk.radius == k.disk.radius);
  CHECK(r.s <= r.s1);
  CHECK(r.total_solves % 32 == 0);
  CHECK(r.basis.cols() == r.s1);
  CHECK(r.filtered_basis.cols() == r.s1);
}
