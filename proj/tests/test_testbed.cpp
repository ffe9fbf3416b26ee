#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "isolab/testbed.hpp"

using namespace isolab;

TEST_CASE("generator fixtures") {
  SECTION("identity") {
    const auto ms = generate(EnsembleSpec{EnsembleKind::identity, 3, 0.0, 0, 1});
    CHECK(ms.front() == Matrix::identity(3));
  }
  SECTION("doubling columns follow the halving pattern") {
    const auto ms = generate(EnsembleSpec{EnsembleKind::doubling, 4, 0.0, 0, 1});
    const Matrix& d = ms.front();
    CHECK(d(0, 0) == 1.0);
    CHECK(d(1, 1) == 1.0);
    CHECK(d(1, 2) == 1.0);  // columns 1 and 2 collide
    CHECK(d(2, 3) == 1.0);
    CHECK(hs_norm(d) == Catch::Approx(2.0));
  }
  SECTION("pair correlation rho=0.4, n=2") {
    const auto ms = generate(EnsembleSpec{EnsembleKind::pair_correlation, 2, 0.4, 0, 1});
    const Matrix& t = ms.front();
    CHECK(t(0, 0) == 1.0);
    CHECK(t(0, 1) == Catch::Approx(0.4));
    CHECK(t(1, 1) == Catch::Approx(std::sqrt(0.84)));
  }
  SECTION("uniform correlation reproduces its Gram matrix") {
    const auto ms =
        generate(EnsembleSpec{EnsembleKind::uniform_correlation, 4, 0.25, 0, 1});
    const Matrix& t = ms.front();
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        CHECK(t.column_dot(i, j) == Catch::Approx(i == j ? 1.0 : 0.25).margin(1e-12));
  }
  SECTION("gaussian columns have unit norm") {
    const auto ms =
        generate(EnsembleSpec{EnsembleKind::gaussian_normalized, 8, 0.0, 99, 3});
    for (const Matrix& t : ms)
      for (int j = 0; j < 8; ++j)
        CHECK(std::abs(t.column_norm(j) - 1.0) <= 1e-12);
  }
  SECTION("rank-deficient matrices have the requested numerical rank") {
    const auto ms = generate(EnsembleSpec{EnsembleKind::rank_deficient, 6, 3, 4, 2});
    for (const Matrix& t : ms) {
      Matrix g(6, 6);
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) g(i, j) = t.column_dot(i, j);
      const Spectrum sp = sym_eigs(g);
      int rank = 0;
      for (double v : sp.eigenvalues)
        if (v > 1e-9) ++rank;
      CHECK(rank == 3);
    }
  }
  SECTION("invalid parameters are rejected") {
    CHECK_THROWS_AS(generate(EnsembleSpec{EnsembleKind::pair_correlation, 2, 1.0, 0, 1}), Error);
    CHECK_THROWS_AS(generate(EnsembleSpec{EnsembleKind::rank_deficient, 4, 4, 0, 1}), Error);
    CHECK_THROWS_AS(generate(EnsembleSpec{EnsembleKind::identity, 0, 0.0, 0, 1}), Error);
  }
}

TEST_CASE("generation is bitwise deterministic in the seed") {
  const EnsembleSpec spec{EnsembleKind::gaussian_normalized, 6, 0.0, 2024, 4};
  const auto a = generate(spec);
  const auto b = generate(spec);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);

  EnsembleSpec other = spec;
  other.seed = 2025;
  CHECK_FALSE(generate(other).front() == a.front());
}

TEST_CASE("doubling members never contain a colliding pair") {
  for (int n : {4, 6, 8}) {
    const Matrix d = generate(EnsembleSpec{EnsembleKind::doubling, n, 0.0, 0, 1}).front();
    for (double eps : {0.3, 0.99}) {
      const IsoFamily f = enumerate_isomorphism_family(d, eps);
      for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) {
        const SubsetMask sigma(n, b);
        if (!membership_query(f, sigma)) continue;
        for (int i = 1; i + 1 < n; i += 2)
          CHECK_FALSE((sigma.contains(i) && sigma.contains(i + 1)));
      }
    }
  }
}

TEST_CASE("random_subset_rate fixtures") {
  SECTION("n=4: one pair, rate 3/4, exact by enumeration") {
    const EnsembleSpec spec{EnsembleKind::doubling, 4, 0.0, 0, 1};
    const RateResult r = random_subset_rate(spec, 0.5, 2000, 7);
    CHECK(r.pairs == 1);
    CHECK(r.exact == Catch::Approx(0.75));
    const Matrix d = generate(spec).front();
    const IsoFamily f = enumerate_isomorphism_family(d, 0.5);
    CHECK(r.exact == Catch::Approx(member_count(f) / 16.0));
  }
  SECTION("n=2: no collision, rate 1") {
    const RateResult r =
        random_subset_rate(EnsembleSpec{EnsembleKind::doubling, 2, 0.0, 0, 1}, 0.5, 100, 7);
    CHECK(r.pairs == 0);
    CHECK(r.exact == 1.0);
    CHECK(r.estimate == 1.0);
  }
  SECTION("estimate stays within three binomial standard errors") {
    const EnsembleSpec spec{EnsembleKind::doubling, 9, 0.0, 0, 1};
    const long trials = 20000;
    const RateResult r = random_subset_rate(spec, 0.4, trials, 12345);
    const double se = std::sqrt(r.exact * (1.0 - r.exact) / trials);
    CHECK(std::abs(r.estimate - r.exact) <= 3.0 * se);
  }
  SECTION("non-doubling specs are rejected") {
    CHECK_THROWS_AS(
        random_subset_rate(EnsembleSpec{EnsembleKind::identity, 4, 0.0, 0, 1}, 0.5, 10, 0),
        Error);
  }
}

TEST_CASE("estimate_constants fixtures") {
  SECTION("identity row: c_eq2 * eps^2 = 1") {
    const EstimateReport rep = estimate_constants(
        {EnsembleSpec{EnsembleKind::identity, 3, 0.0, 0, 1}}, {0.5}, {2.0});
    REQUIRE(rep.rows.size() == 1);
    const EstimateRow& row = rep.rows.front();
    CHECK(row.status == "ok");
    CHECK(row.c_eq2 == Catch::Approx(4.0));
    CHECK(row.c_eq4 == Catch::Approx(4.0));
    CHECK(row.c_eq6 == Catch::Approx(4.0));
    CHECK(std::isnan(row.c_eq9));  // S = 0: nothing to suppress
  }
  SECTION("doubling row: c_eq2 = 2") {
    const EstimateReport rep = estimate_constants(
        {EnsembleSpec{EnsembleKind::doubling, 4, 0.0, 0, 1}}, {0.5}, {2.0});
    REQUIRE(rep.rows.size() == 1);
    CHECK(rep.rows.front().c_eq2 == Catch::Approx(2.0));
    CHECK(rep.rows.front().status == "ok");
  }
  SECTION("every reported constant is positive") {
    const EstimateReport rep = estimate_constants(
        {EnsembleSpec{EnsembleKind::gaussian_normalized, 6, 0.0, 77, 3}},
        {0.3, 0.6}, {1.5, 2.0});
    CHECK(rep.rows.size() == 12);
    for (const EstimateRow& row : rep.rows) {
      CHECK(row.status == "ok");
      CHECK(row.c_eq2 > 0.0);
      CHECK(row.c_eq4 > 0.0);
      CHECK(row.c_eq6 > 0.0);
      if (!std::isnan(row.c_eq9)) CHECK(row.c_eq9 > 0.0);
    }
  }
  SECTION("CSV is byte-identical across runs and carries the exact header") {
    const std::vector<EnsembleSpec> specs{
        EnsembleSpec{EnsembleKind::gaussian_normalized, 5, 0.0, 31415, 2}};
    const std::string a = estimate_csv(estimate_constants(specs, {0.4}, {2.0}));
    const std::string b = estimate_csv(estimate_constants(specs, {0.4}, {2.0}));
    CHECK(a == b);
    CHECK(a.rfind("ensemble,n,epsilon,C,seed,c_eq2,c_eq4,c_eq6,c_eq9,status\n", 0) == 0);
  }
  SECTION("plot TSV aggregates medians per epsilon") {
    const EstimateReport rep = estimate_constants(
        {EnsembleSpec{EnsembleKind::gaussian_normalized, 5, 0.0, 7, 3}}, {0.4, 0.6},
        {2.0});
    const std::string tsv = estimate_plot_tsv(rep);
    CHECK(tsv.rfind("ensemble\tn\tC\tepsilon\t", 0) == 0);
    // one header plus one line per (C, eps) group
    CHECK(std::count(tsv.begin(), tsv.end(), '\n') == 3);
  }
}
