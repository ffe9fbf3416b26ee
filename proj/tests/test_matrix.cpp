#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "isolab/matrix.hpp"
#include "isolab/subset.hpp"

using namespace isolab;

TEST_CASE("matrix construction validates dimensions and entries") {
  CHECK_THROWS_AS(Matrix(0, 3), Error);
  CHECK_THROWS_AS(Matrix(65, 1), Error);
  CHECK_THROWS_AS(Matrix(2, 2, {1.0, 2.0, 3.0}), Error);
  CHECK_THROWS_AS(Matrix(1, 1, {std::nan("")}), Error);
  CHECK_NOTHROW(Matrix(64, 64));
  CHECK(Matrix().empty());
}

TEST_CASE("matrix text format round trips and rejects bad input") {
  Matrix m = Matrix::from_rows({{1.0, 0.5}, {0.25, -3.0}});
  std::istringstream in(format_matrix(m));
  CHECK(parse_matrix(in) == m);

  auto reject = [](const std::string& text) {
    std::istringstream s(text);
    CHECK_THROWS_AS(parse_matrix(s), Error);
  };
  reject("");
  reject("2\n1 2\n3 4\n");
  reject("2 2\n1 2\n3\n");
  reject("2 2\n1 2 9\n3 4\n");
  reject("1 2\n1 nan\n");
  reject("1 2\n1 inf\n");
  reject("1 1\nhello\n");
  reject("70 1\n1\n");
}

TEST_CASE("hs_norm fixtures") {
  CHECK(hs_norm(Matrix::identity(4)) == Catch::Approx(2.0));
  CHECK(hs_norm(Matrix(3, 3)) == 0.0);
  CHECK(hs_norm(Matrix::from_rows({{1, 1}, {0, 1}})) == Catch::Approx(std::sqrt(3.0)));
}

TEST_CASE("gram_normalized fixtures") {
  SECTION("orthogonal columns give the identity") {
    Matrix t = Matrix::from_rows({{2, 0}, {0, 0.5}});
    Matrix g = gram_normalized(t, SubsetMask::full(2));
    CHECK(g(0, 0) == 1.0);
    CHECK(g(1, 1) == 1.0);
    CHECK(g(0, 1) == Catch::Approx(0.0).margin(1e-15));
  }
  SECTION("two identical columns") {
    Matrix t = Matrix::from_rows({{1, 1}, {0, 0}});
    Matrix g = gram_normalized(t, SubsetMask::full(2));
    CHECK(g(0, 1) == Catch::Approx(1.0));
  }
  SECTION("columns at 60 degrees") {
    const double th = std::numbers::pi / 3.0;
    Matrix t = Matrix::from_rows({{1, std::cos(th)}, {0, std::sin(th)}});
    Matrix g = gram_normalized(t, SubsetMask::full(2));
    CHECK(g(0, 1) == Catch::Approx(0.5));
  }
  SECTION("zero column inside sigma reports its index") {
    Matrix t = Matrix::from_rows({{1, 0}, {0, 0}});
    try {
      gram_normalized(t, SubsetMask::full(2));
      FAIL("expected zero-column error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::zero_column);
      CHECK(std::string(e.what()).find('1') != std::string::npos);
    }
  }
}

TEST_CASE("principal_submatrix fixtures") {
  Matrix a = Matrix::from_rows({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}});
  CHECK(principal_submatrix(a, SubsetMask::full(3)) == a);

  Matrix corner = principal_submatrix(a, SubsetMask::of(3, {0, 2}));
  CHECK(corner == Matrix::from_rows({{1, 3}, {7, 9}}));

  Matrix empty = principal_submatrix(a, SubsetMask(3));
  CHECK(empty.empty());

  CHECK_THROWS_AS(principal_submatrix(a, SubsetMask::full(4)), Error);
  CHECK_THROWS_AS(principal_submatrix(Matrix::from_rows({{1, 2, 3}}), SubsetMask::full(3)), Error);
}

TEST_CASE("subset mask basics") {
  SubsetMask m = SubsetMask::of(5, {0, 2, 4});
  CHECK(m.size() == 3);
  CHECK(m.contains(2));
  CHECK_FALSE(m.contains(1));
  CHECK(m.with(1).size() == 4);
  CHECK(m.without(2) == SubsetMask::of(5, {0, 4}));
  CHECK(m.is_subset_of(SubsetMask::full(5)));
  CHECK(m.indices() == std::vector<int>{0, 2, 4});
  CHECK_THROWS_AS(m.contains(5), Error);
  CHECK_THROWS_AS(SubsetMask(65), Error);
  CHECK_THROWS_AS(SubsetMask(2, 0b100), Error);
}

TEST_CASE("lexicographic subset order") {
  auto lt = [](std::initializer_list<int> a, std::initializer_list<int> b) {
    return lex_less(SubsetMask::of(5, a), SubsetMask::of(5, b));
  };
  CHECK(lt({0, 1, 3}, {0, 2, 3}));
  CHECK_FALSE(lt({0, 2, 3}, {0, 1, 3}));
  CHECK(lt({0}, {0, 1}));
  CHECK(lt({0, 1}, {1}));
  CHECK(lt({}, {0}));
  CHECK_FALSE(lt({2}, {2}));
}
