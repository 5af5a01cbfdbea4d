#include <doctest.h>

#include "llab/errors.hpp"
#include "llab/exterior.hpp"
#include "oracles.hpp"

using namespace llab;

TEST_SUITE("exterior") {

TEST_CASE("wedge of generators") {
  KForm f1 = KForm::generator(4, 0), f2 = KForm::generator(4, 1);
  KForm delta = wedge(f1, f2);
  CHECK(delta.coefficient(0b11) == 1);
  CHECK(wedge(f2, f1) == -delta);
  CHECK(wedge(f1, f1).is_zero());
}

TEST_CASE("wedge agrees with the permutation-sum definition") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 3 + rng() % 4;
    std::size_t p = 1 + rng() % 2, q = 1 + rng() % 2;
    KForm a = oracle::random_form(rng, n, p, 3), b = oracle::random_form(rng, n, q, 3);
    CHECK(wedge(a, b) == oracle::wedge_by_permutations(a, b));
  }
}

TEST_CASE("associative and graded commutative on random forms") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 4 + rng() % 7;
    std::size_t p = rng() % 4, q = rng() % 4, r = rng() % 3;
    KForm a = oracle::random_form(rng, n, p, 4), b = oracle::random_form(rng, n, q, 4),
          c = oracle::random_form(rng, n, r, 4);
    CHECK(wedge(wedge(a, b), c) == wedge(a, wedge(b, c)));
    KForm ba = wedge(b, a);
    CHECK(wedge(a, b) == ((p * q) % 2 ? -ba : ba));
  }
}

TEST_CASE("wedging with a generator kills the terms containing it") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 4 + rng() % 6, g = rng() % n;
    KForm a = oracle::random_form(rng, n, 2, 5);
    KForm w = wedge(a, KForm::generator(n, g));
    for (const auto& [m, c] : a.terms())
      if (m >> g & 1u) CHECK(w.coefficient(m | (Mask(1) << g)) == 0);
    for (const auto& [m, c] : w.terms()) CHECK((m >> g & 1u));
  }
}

TEST_CASE("powers of 2-forms") {
  // Dimension 4: f1 f2 x1 x2 -> generators 0..3.
  KForm delta = KForm::product(4, {0, 1});
  KForm g1 = KForm::product(4, {2, 3});
  CHECK(power(delta, 2).is_zero());
  CHECK(power(delta, 0) == KForm::scalar(4, 1));
  CHECK(power(delta + g1, 2) == 2 * KForm::product(4, {0, 1, 2, 3}));
  CHECK(divided_power(delta + g1, 2) == KForm::product(4, {0, 1, 2, 3}));
  std::mt19937 rng(3);
  for (std::size_t n = 1; n <= 4; ++n) {
    KForm a = oracle::random_form(rng, 2 * n, 2, 6);
    CHECK(power(a, n + 1).is_zero());
  }
}

TEST_CASE("g_2 wedge g_2 by brute force") {
  // x1..x4 as generators 0..3; g2 = x1^x4 - x2^x3.
  KForm g2 = KForm::product(4, {0, 3}) - KForm::product(4, {1, 2});
  KForm sq = wedge(g2, g2);
  CHECK(sq == oracle::wedge_by_permutations(g2, g2));
  CHECK(abs(sq.coefficient(0b1111)) == 2);
}

TEST_CASE("top coefficient") {
  CHECK(top_coefficient(KForm::product(4, {0, 1, 2, 3})) == 1);
  CHECK(top_coefficient(KForm::product(4, {1, 0, 2, 3})) == -1);
  CHECK(top_coefficient(KForm(4, 4)) == 0);
}

TEST_CASE("degree bases are lexicographic and invertible") {
  DegreeBasis b(5, 2);
  CHECK(b.size() == 10);
  for (std::size_t i = 0; i < b.size(); ++i) CHECK(b.index_of(b.mask(i)) == i);
  for (std::size_t i = 0; i + 1 < b.size(); ++i) CHECK(LexLess{}(b.mask(i), b.mask(i + 1)));
  std::mt19937 rng(8);
  KForm f = oracle::random_form(rng, 5, 2, 4);
  CHECK(b.form(b.coordinates(f)) == f);
}

TEST_CASE("render and parse round trip") {
  std::vector<std::string> labels{"f1", "f2", "x1", "x2", "x3", "x4"};
  KForm f = KForm::product(6, {0, 1}) + Rational(3, 2) * KForm::product(6, {2, 5}) - KForm::product(6, {3, 4});
  std::string text = render(f, labels);
  CHECK(text == "f1^f2 + 3/2 x1^x4 - x2^x3");
  CHECK(parse_form(text, labels) == f);
  CHECK(parse_form("3/2*x1^x4", labels) == Rational(3, 2) * KForm::product(6, {2, 5}));
  CHECK(parse_form("x2^x1", labels) == -KForm::product(6, {2, 3}));
  CHECK_THROWS_AS(parse_form("x1^x1", labels), InputError);
  CHECK_THROWS_AS(parse_form("y1^x1", labels), InputError);
  CHECK_THROWS_AS(parse_form("f1 + x1^x2", labels), InputError);
}

TEST_CASE("dimension limit") {
  CHECK_NOTHROW(KForm(32, 1));
  CHECK_THROWS_AS(KForm(33, 1), DimensionError);
}

}
