#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "isolab/select.hpp"
#include "isolab/testbed.hpp"
#include "isolab/witness.hpp"
#include "oracles.hpp"

using namespace isolab;

namespace {

Matrix doubling4_scaled() {
  const Matrix d = generate(EnsembleSpec{EnsembleKind::doubling, 4, 0.0, 0, 1}).front();
  return d.scaled(1.0 / std::sqrt(2.0));
}

}  // namespace

TEST_CASE("select_exhaustive fixtures") {
  SECTION("identity with counting measure picks everything") {
    const SelectionResult r =
        select_exhaustive(Matrix::identity(4), 0.5, IndexMeasure::counting(4));
    CHECK(r.chosen == SubsetMask::full(4));
    CHECK(r.mu_value == 4.0);
    CHECK(r.empirical_c == Catch::Approx(4.0));  // 1/eps^2
  }
  SECTION("scaled doubling: size 3, rhs 0.5, constant 6") {
    const SelectionResult r =
        select_exhaustive(doubling4_scaled(), 0.5, IndexMeasure::counting(4));
    CHECK(r.chosen == SubsetMask::of(4, {0, 1, 3}));  // lexicographic tie-break
    CHECK(r.mu_value == 3.0);
    CHECK(r.bound_rhs == Catch::Approx(0.5));
    CHECK(r.empirical_c == Catch::Approx(6.0));
  }
  SECTION("concentrated measure keeps its index") {
    const SelectionResult r = select_exhaustive(
        doubling4_scaled(), 0.5, IndexMeasure::general({0, 0, 5, 0}));
    CHECK(r.chosen.contains(2));
  }
  SECTION("operators above norm one are rejected") {
    const Matrix d = generate(EnsembleSpec{EnsembleKind::doubling, 4, 0.0, 0, 1}).front();
    CHECK_THROWS_AS(select_exhaustive(d, 0.5, IndexMeasure::counting(4)), Error);
  }
}

TEST_CASE("select_greedy fixtures") {
  CHECK(select_greedy(Matrix::identity(4), 0.5, IndexMeasure::counting(4)).chosen ==
        SubsetMask::full(4));

  const SelectionResult g =
      select_greedy(doubling4_scaled(), 0.5, IndexMeasure::counting(4));
  CHECK(g.chosen == SubsetMask::of(4, {0, 1, 3}));
  CHECK(g.chosen.size() == 3);

  // all pairwise inner products above eps: only a singleton survives,
  // the one with the largest weight
  const Matrix t =
      generate(EnsembleSpec{EnsembleKind::uniform_correlation, 3, 0.8, 0, 1}).front()
          .scaled(1.0 / std::sqrt(1.0 + 2 * 0.8));
  const SelectionResult s =
      select_greedy(t, 0.3, IndexMeasure::general({1, 7, 2}));
  CHECK(s.chosen == SubsetMask::of(3, {1}));
}

TEST_CASE("exhaustive dominates greedy and both verify independently") {
  for (int trial = 0; trial < 5; ++trial) {
    Matrix t =
        generate(EnsembleSpec{EnsembleKind::gaussian_normalized, 6, 0.0, std::uint64_t(410 + trial), 1})
            .front();
    t = t.scaled(1.0 / operator_norm(t));
    const IndexMeasure mu = IndexMeasure::counting(6);
    const SelectionResult ex = select_exhaustive(t, 0.5, mu);
    const SelectionResult gr = select_greedy(t, 0.5, mu);
    CHECK(ex.mu_value >= gr.mu_value);
    CHECK(check_isomorphism(t, 0.5, ex.chosen));
    CHECK(check_isomorphism(t, 0.5, gr.chosen));
  }
}

TEST_CASE("scaling the measure leaves the chosen sets unchanged") {
  Matrix t = generate(EnsembleSpec{EnsembleKind::gaussian_normalized, 5, 0.0, 88, 1}).front();
  t = t.scaled(1.0 / operator_norm(t));
  const IndexMeasure mu = IndexMeasure::general({1, 3, 2, 5, 4});
  const IndexMeasure scaled = IndexMeasure::general({10, 30, 20, 50, 40});
  CHECK(select_exhaustive(t, 0.4, mu).chosen == select_exhaustive(t, 0.4, scaled).chosen);
  CHECK(select_greedy(t, 0.4, mu).chosen == select_greedy(t, 0.4, scaled).chosen);
}

TEST_CASE("selection maximum dominates the witness average") {
  for (int trial = 0; trial < 4; ++trial) {
    Matrix t =
        generate(EnsembleSpec{EnsembleKind::gaussian_normalized, 6, 0.0, std::uint64_t(9100 + trial), 1})
            .front();
    t = t.scaled(1.0 / operator_norm(t));
    const double eps = 0.4;
    const IsoFamily f = enumerate_isomorphism_family(t, eps);
    std::vector<double> w(6);
    double weighted = 0.0;
    for (int i = 0; i < 6; ++i) {
      const double cn = t.column_norm(i);
      w[static_cast<std::size_t>(i)] = cn * cn;
      weighted += cn * cn;  // counting measure
    }
    const WitnessMeasure wm = solve_game(build_game(f, w));
    const SelectionResult r = select_exhaustive(t, eps, IndexMeasure::counting(6));
    CHECK(r.mu_value >= weighted * wm.floor - 1e-9);
  }
}

TEST_CASE("measure conversions") {
  SECTION("unit columns reduce mu_to_lambda to plain normalization") {
    const IndexMeasure lambda =
        mu_to_lambda(IndexMeasure::general({2, 6}), Matrix::identity(2));
    CHECK(lambda.weights[0] == Catch::Approx(0.25));
    CHECK(lambda.weights[1] == Catch::Approx(0.75));
  }
  SECTION("column norms (1, 1/2) with flat mu") {
    Matrix t(2, 2);
    t(0, 0) = 1.0;
    t(1, 1) = 0.5;
    const IndexMeasure lambda = mu_to_lambda(IndexMeasure::counting(2), t);
    CHECK(lambda.weights[0] == Catch::Approx(0.8));
    CHECK(lambda.weights[1] == Catch::Approx(0.2));
  }
  SECTION("round trip reproduces mu up to scale") {
    SplitMix64 rng(1234);
    for (int trial = 0; trial < 10; ++trial) {
      const Matrix t = oracles::random_operator(4, 4, rng);
      bool ok = true;
      for (int i = 0; i < 4; ++i) ok = ok && t.column_norm(i) > 0.0;
      if (!ok) continue;
      std::vector<double> w(4);
      for (double& v : w) v = rng.uniform() + 0.1;
      const IndexMeasure mu = IndexMeasure::general(w);
      const IndexMeasure back = lambda_to_mu(mu_to_lambda(mu, t), t);
      const double scale = back.weights[0] / mu.weights[0];
      for (int i = 0; i < 4; ++i)
        CHECK(back.weights[static_cast<std::size_t>(i)] ==
              Catch::Approx(scale * mu.weights[static_cast<std::size_t>(i)]).epsilon(1e-12));
    }
  }
  SECTION("degenerate denominators are rejected") {
    const Matrix z(2, 2);
    CHECK_THROWS_AS(mu_to_lambda(IndexMeasure::counting(2), z), Error);
    CHECK_THROWS_AS(
        lambda_to_mu(IndexMeasure::probability({0.5, 0.5}), z), Error);
  }
}

TEST_CASE("bound_reports fixtures") {
  SECTION("identity counting: eq6 ratio is 1/eps^2") {
    const SelectionResult r =
        select_exhaustive(Matrix::identity(4), 0.5, IndexMeasure::counting(4));
    const SelectionReports rep =
        bound_reports(Matrix::identity(4), 0.5, IndexMeasure::counting(4), r);
    REQUIRE(rep.eq6.has_value());
    CHECK(*rep.eq6 == Catch::Approx(4.0));
    REQUIRE(rep.thm14.has_value());
    CHECK(*rep.thm14 == Catch::Approx(1.0));
    REQUIRE(rep.eq5_confirmed.has_value());
    CHECK(*rep.eq5_confirmed);
  }
  SECTION("unit-column doubling: restricted-invertibility ratio 1.5") {
    const Matrix d = generate(EnsembleSpec{EnsembleKind::doubling, 4, 0.0, 0, 1}).front();
    SelectionResult r;  // selection done on the scaled operator
    r.chosen = SubsetMask::of(4, {0, 1, 3});
    r.method = "exhaustive";
    const SelectionReports rep = bound_reports(d, 0.5, IndexMeasure::counting(4), r);
    REQUIRE(rep.thm14.has_value());
    CHECK(*rep.thm14 == Catch::Approx(1.5));  // 3 * 2 / 4
    REQUIRE(rep.cor15.has_value());
    CHECK(*rep.cor15 == Catch::Approx(24.0));  // 3 * 2 / 0.25
    REQUIRE(rep.eq5_confirmed.has_value());
    CHECK(*rep.eq5_confirmed);
  }
  SECTION("zero operator: every ratio vacuous") {
    const Matrix z(3, 3);
    const SelectionResult r = select_exhaustive(z, 0.5, IndexMeasure::counting(3));
    CHECK(r.chosen == SubsetMask::full(3));
    CHECK(std::isnan(r.empirical_c));
    const SelectionReports rep = bound_reports(z, 0.5, IndexMeasure::counting(3), r);
    CHECK_FALSE(rep.eq4.has_value());
    CHECK_FALSE(rep.eq6.has_value());
    CHECK_FALSE(rep.thm14.has_value());
    CHECK_FALSE(rep.cor15.has_value());
  }
  SECTION("an unverified result is rejected") {
    const Matrix d = generate(EnsembleSpec{EnsembleKind::doubling, 4, 0.0, 0, 1}).front();
    SelectionResult r;
    r.chosen = SubsetMask::of(4, {1, 2});  // colliding pair
    CHECK_THROWS_AS(bound_reports(d, 0.5, IndexMeasure::counting(4), r), Error);
  }
}
