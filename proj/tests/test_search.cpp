#include <catch2/catch_amalgamated.hpp>

#include <numeric>

#include "eigcount/eigcount.hpp"
#include "eigcount/experiment.hpp"
#include "eigcount/oracle.hpp"
#include "support.hpp"

using namespace eigcount;

TEST_CASE("sample_gaussian is seeded and standard normal", "[search]") {
  const DenseMatrix a = sample_gaussian(50, 4, 42);
  const DenseMatrix b = sample_gaussian(50, 4, 42);
  const DenseMatrix c = sample_gaussian(50, 4, 43);
  CHECK(a == b);
  CHECK_FALSE(a == c);

  const DenseMatrix big = sample_gaussian(1000, 20, 7);
  double sum = 0.0, sq = 0.0;
  for (const auto& v : big.data()) {
    CHECK(v.imag() == 0.0);
    sum += v.real();
    sq += v.real() * v.real();
  }
  const double count = static_cast<double>(big.data().size());
  CHECK(std::abs(sum / count) < 0.02);
  CHECK(std::abs(sq / count - 1.0) < 0.03);
  CHECK_THROWS_AS(sample_gaussian(5, 0, 1), std::invalid_argument);
}

TEST_CASE("trace_estimate", "[search]") {
  SECTION("zero filtered block") {
    const auto t = trace_estimate(sample_gaussian(10, 3, 1), DenseMatrix(10, 3));
    CHECK(t.s0 == 0);
    CHECK(t.real == 0.0);
  }
  SECTION("ceil of the mean") {
    const DenseMatrix y = DenseMatrix::identity(3);
    DenseMatrix u(3, 3);
    u(0, 0) = 1.2;
    u(1, 1) = 1.0;
    u(2, 2) = cplx(0.9, 0.3);
    const auto t = trace_estimate(y, u);
    CHECK(t.real == Catch::Approx(3.1 / 3.0));
    CHECK(t.imag == Catch::Approx(0.1));
    CHECK(t.s0 == 2);
  }
  SECTION("exact projector gives rank on average") {
    // P = diag(1,1,1,1,1,0,...,0), n = 30
    std::vector<cplx> d(30, 0.0);
    std::fill(d.begin(), d.begin() + 5, 1.0);
    const DenseMatrix p = DenseMatrix::diagonal(d);
    double mean = 0.0;
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
      const DenseMatrix y = sample_gaussian(30, 10, seed);
      mean += trace_estimate(y, p * y).real;
    }
    mean /= 400.0;
    CHECK(std::abs(mean - 5.0) < 0.2);
  }
  SECTION("shape mismatch") {
    CHECK_THROWS_AS(trace_estimate(DenseMatrix(4, 2), DenseMatrix(4, 3)), ShapeError);
  }
}

TEST_CASE("SearchConfig validation", "[search]") {
  SearchConfig c;
  CHECK_NOTHROW(c.validate(10));
  CHECK_THROWS_AS(c.validate(9), std::invalid_argument);
  c.growth = 1.0;
  CHECK_THROWS_AS(c.validate(10), std::invalid_argument);
  c = SearchConfig{};
  c.nodes = 0;
  CHECK_THROWS_AS(c.validate(10), std::invalid_argument);
  c = SearchConfig{};
  c.max_rounds = 0;
  CHECK_THROWS_AS(c.validate(10), std::invalid_argument);
  c = SearchConfig{};
  c.rank_tol = -1.0;
  CHECK_THROWS_AS(c.validate(10), std::invalid_argument);
}

TEST_CASE("search on the 8x8 similarity pencil keeps the full 6-column block", "[search]") {
  const auto e = oracle::run_small_diagonal_experiment(2024);
  CHECK(e.s1 == 6);
}

TEST_CASE("search returns an upper bound with a containing basis", "[search][property]") {
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto k = testing::make_pencil(seed, 20, seed % 2 == 0, 0.05);
    SearchConfig cfg;
    cfg.samples = 4;
    cfg.nodes = 32;
    cfg.seed = seed + 1000;
    const SearchResult r = search(k.pencil, k.disk, cfg);
    INFO("seed " << seed << " inside " << k.inside << " s1 " << r.s1);
    CHECK(r.s1 >= k.inside);
    CHECK(r.basis.cols() == r.s1);
    // orthonormal basis
    CHECK((adjoint_times(r.basis, r.basis) - DenseMatrix::identity(r.s1)).max_abs() <= 1e-12);
    if (k.inside == 0 || r.s1 == 0) continue;
    DenseMatrix inside(20, 0);
    for (std::size_t j = 0; j < 20; ++j)
      if (k.disk.contains(k.eigenvalues[j])) {
        DenseMatrix v(20, 1);
        std::copy(k.eigenvectors.col(j).begin(), k.eigenvectors.col(j).end(), v.col(0).begin());
        inside = inside.hcat(v);
      }
    const auto sines = oracle::principal_angle_sines(r.basis, oracle::orthonormal_basis(inside));
    CHECK(*std::max_element(sines.begin(), sines.end()) <= 1e-6);
    ++checked;
  }
  CHECK(checked > 50);
}

TEST_CASE("search block widths grow with alpha until rank drops", "[search]") {
  // 12 eigenvalues well inside, p = 2 forces several rounds
  std::vector<cplx> lam;
  for (int i = 0; i < 12; ++i) lam.push_back(std::polar(0.5, 0.5 * i));
  for (int i = 0; i < 28; ++i) lam.push_back(std::polar(3.0 + 0.1 * i, 0.3 * i));
  const Pencil p = Pencil::standard(SparseMatrix::from_dense(DenseMatrix::diagonal(lam)));
  SearchConfig cfg;
  cfg.samples = 2;
  cfg.nodes = 32;
  cfg.seed = 5;
  cfg.max_rounds = 20;
  const SearchResult r = search(p, Disk({0, 0}, 1.0), cfg);
  CHECK(r.rounds > 1);
  CHECK(r.s1 >= 12);
  CHECK(r.s1 < r.final_block);
  CHECK(r.total_solves == r.filtered_columns * 32);
}

TEST_CASE("search reports MaxRoundsExceeded", "[search]") {
  std::vector<cplx> lam;
  for (int i = 0; i < 12; ++i) lam.push_back(std::polar(0.5, 0.5 * i));
  for (int i = 0; i < 28; ++i) lam.push_back(std::polar(3.0 + 0.1 * i, 0.3 * i));
  const Pencil p = Pencil::standard(SparseMatrix::from_dense(DenseMatrix::diagonal(lam)));
  SearchConfig cfg;
  cfg.samples = 2;
  cfg.nodes = 32;
  cfg.max_rounds = 1;
  try {
    search(p, Disk({0, 0}, 1.0), cfg);
    FAIL("expected MaxRoundsExceeded");
  } catch (const MaxRoundsExceeded& e) {
    CHECK(e.partial().rounds == 1);
    CHECK(e.partial().s1 == e.partial().final_block);
  }
  cfg.partial_on_max_rounds = true;
  const SearchResult r = search(p, Disk({0, 0}, 1.0), cfg);
  CHECK(r.rounds == 1);
}

TEST_CASE("search is reproducible for a fixed seed", "[search]") {
  const auto k = testing::make_pencil(77, 30, false);
  SearchConfig cfg;
  cfg.samples = 5;
  cfg.seed = 99;
  const SearchResult a = search(k.pencil, k.disk, cfg);
  const SearchResult b = search(k.pencil, k.disk, cfg);
  CHECK(a.basis == b.basis);
  CHECK(a.s1 == b.s1);
  CHECK(a.s0 == b.s0);
}
