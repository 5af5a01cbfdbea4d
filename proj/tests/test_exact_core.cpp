#include <doctest.h>

#include "llab/errors.hpp"
#include "llab/exact_core.hpp"
#include "oracles.hpp"

using namespace llab;

TEST_SUITE("exact_core") {

TEST_CASE("parse_rational") {
  CHECK(parse_rational("-3/2") == Rational(-3, 2));
  CHECK(parse_rational("4/6") == Rational(2, 3));
  CHECK(parse_rational("7") == 7);
  CHECK_THROWS_AS(parse_rational("1.5"), InputError);
  CHECK_THROWS_AS(parse_rational("1/0"), InputError);
  CHECK_THROWS_AS(parse_rational(""), InputError);
}

TEST_CASE("rank of small matrices") {
  CHECK(rank(QMatrix::identity(3)) == 3);
  CHECK(rank(QMatrix(4, 7)) == 0);
  CHECK(rank(QMatrix::from_dense({{1, 2}, {2, 4}})) == 1);
}

TEST_CASE("nullspace of small matrices") {
  CHECK(nullspace_basis(QMatrix::identity(3)).empty());
  auto z = nullspace_basis(QMatrix(2, 3));
  REQUIRE(z.size() == 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(z[i][j] == (i == j ? 1 : 0));
  auto n = nullspace_basis(QMatrix::from_dense({{1, 1}}));
  REQUIRE(n.size() == 1);
  CHECK(n[0][0] == -n[0][1]);
  CHECK(n[0][0] != 0);
}

TEST_CASE("in_column_space small cases") {
  QVector v{Rational(3), Rational(-1, 2)};
  CHECK(*in_column_space(QMatrix::identity(2), v) == v);
  CHECK_FALSE(in_column_space(QMatrix(2, 2), v).has_value());
  auto c = in_column_space(QMatrix::from_dense({{2}, {0}}), QVector{1, 0});
  REQUIRE(c.has_value());
  CHECK((*c)[0] == Rational(1, 2));
  CHECK_THROWS_AS(in_column_space(QMatrix::identity(2), QVector{1}), DimensionError);
}

TEST_CASE("random matrices: rank-nullity, kernels and strategies agree with a naive oracle") {
  std::mt19937 rng(20240611);
  for (int trial = 0; trial < 120; ++trial) {
    std::size_t rows = 1 + rng() % 9, cols = 1 + rng() % 9;
    double density = trial % 3 == 0 ? 0.8 : 0.3;
    QMatrix m = oracle::random_matrix(rng, rows, cols, density);
    const std::size_t r = rank(m);
    CHECK(r == oracle::naive_rank(m));
    CHECK(rank(m, Strategy::sparse) == r);
    CHECK(rank(m, Strategy::dense) == r);
    CHECK(pivot_columns(m, Strategy::sparse) == pivot_columns(m, Strategy::dense));
    auto ns = nullspace_basis(m);
    CHECK(ns.size() + r == cols);
    CHECK(nullspace_basis(m, Strategy::dense) == nullspace_basis(m, Strategy::sparse));
    for (const auto& u : ns) CHECK(is_zero(m * u));
    CHECK(oracle::naive_rank(QMatrix::from_columns(cols, ns)) == ns.size());

    QVector v(rows);
    for (auto& x : v) x = Rational(static_cast<int>(rng() % 7) - 3);
    auto c = in_column_space(m, v);
    if (c) {
      CHECK(m * *c == v);
    } else {
      std::vector<QVector> cols_plus;
      for (std::size_t j = 0; j < cols; ++j) cols_plus.push_back(m.column(j));
      cols_plus.push_back(v);
      CHECK(oracle::naive_rank(QMatrix::from_columns(rows, cols_plus)) == r + 1);
    }
    // Image vectors are always found.
    QVector x(cols);
    for (auto& e : x) e = Rational(static_cast<int>(rng() % 5) - 2);
    QVector y = m * x;
    auto back = in_column_space(m, y, Strategy::dense);
    REQUIRE(back.has_value());
    CHECK(m * *back == y);
  }
}

TEST_CASE("pivot columns are the lexicographically first independent set") {
  QMatrix m = QMatrix::from_dense({{0, 1, 2, 0}, {0, 2, 4, 1}});
  CHECK(pivot_columns(m) == std::vector<std::size_t>{1, 3});
}

TEST_CASE("determinant against cofactor expansion") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 1 + rng() % 6;
    QMatrix m = oracle::random_matrix(rng, n, n, 0.7);
    CHECK(determinant(m) == oracle::cofactor_det(m.to_dense()));
  }
  CHECK(determinant(QMatrix(0, 0)) == 1);
  CHECK_THROWS_AS(determinant(QMatrix(2, 3)), DimensionError);
}

TEST_CASE("matrix products and transposes") {
  QMatrix a = QMatrix::from_dense({{1, 2}, {0, Rational(1, 3)}});
  QMatrix b = QMatrix::from_dense({{0, 1}, {1, 0}});
  CHECK(a * b == QMatrix::from_dense({{2, 1}, {Rational(1, 3), 0}}));
  CHECK(a.transposed().transposed() == a);
  CHECK(a.nonzeros() == 3);
}

}
