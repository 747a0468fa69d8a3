#include <cmath>
#include <numeric>

#include "doctest.h"
#include "synthdim/error.hpp"
#include "synthdim/rational.hpp"

using namespace synthdim;

TEST_CASE("Rational reduces to lowest terms") {
  const Rational r(6, 8);
  CHECK(r.p == 3);
  CHECK(r.q == 4);
  CHECK(r.str() == "3/4");
  CHECK(Rational(0, 5) == Rational(0, 1));
  CHECK(Rational(4, 2).str() == "2/1");
  CHECK_THROWS_AS(Rational(1, 0), ConfigError);
  CHECK_THROWS_AS(Rational(1, -3), ConfigError);
  CHECK_THROWS_AS(Rational(-1, 3), ConfigError);
}

TEST_CASE("Farey sequence: sizes, order and reduction") {
  const auto f1 = farey_sequence(1);
  REQUIRE(f1.size() == 2);
  CHECK(f1[0] == Rational(0, 1));
  CHECK(f1[1] == Rational(1, 1));

  // |F_n| = 1 + sum_{k<=n} totient(k)
  for (int order : {2, 5, 8, 20}) {
    const auto f = farey_sequence(order);
    std::size_t expected = 1;
    for (int k = 1; k <= order; ++k) {
      int phi = 0;
      for (int j = 1; j <= k; ++j) phi += std::gcd(j, k) == 1;
      expected += static_cast<std::size_t>(phi);
    }
    CHECK(f.size() == expected);
    for (std::size_t i = 1; i < f.size(); ++i) {
      CHECK(f[i - 1].value() < f[i].value());
      // Neighbours in a Farey sequence satisfy q1 p2 - p1 q2 = 1.
      CHECK(f[i - 1].q * f[i].p - f[i - 1].p * f[i].q == 1);
    }
  }
  CHECK_THROWS(farey_sequence(0));
}

TEST_CASE("best_rational follows continued-fraction convergents") {
  const double b = std::sqrt(5.0) / 10.0;  // [0; 4, 2, 8, ...]
  CHECK(best_rational(b, 3) == Rational(0, 1));
  CHECK(best_rational(b, 4) == Rational(1, 4));
  CHECK(best_rational(b, 9) == Rational(2, 9));
  CHECK(best_rational(b, 75) == Rational(2, 9));
  CHECK(best_rational(b, 100) == Rational(17, 76));
  CHECK(best_rational(0.4, 100) == Rational(2, 5));
  CHECK(best_rational(0.0, 10) == Rational(0, 1));
  CHECK(best_rational(1.0, 10) == Rational(1, 1));
  CHECK_THROWS(best_rational(1.5, 10));
  CHECK_THROWS(best_rational(0.5, 0));
}

TEST_CASE("parse_rational") {
  CHECK(parse_rational("2/5") == Rational(2, 5));
  CHECK(parse_rational(" 10/4 ") == Rational(5, 2));
  CHECK(parse_rational("1") == Rational(1, 1));
  CHECK_THROWS_AS(parse_rational("1/0"), ConfigError);
  CHECK_THROWS_AS(parse_rational("abc"), ConfigError);
  CHECK_THROWS_AS(parse_rational("1/2/3"), ConfigError);
}
