#include "doctest.h"
#include "ssam/rational.hpp"

using ssam::Rational;

TEST_CASE("rational normalization and arithmetic") {
  CHECK(Rational(4, 8) == Rational(1, 2));
  CHECK(Rational(-4, 8) == Rational(-1, 2));
  CHECK(Rational(4, -8) == Rational(-1, 2));
  CHECK(Rational(0, 7) == Rational(0));

  CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
  CHECK(Rational(1, 2) - Rational(1, 3) == Rational(1, 6));
  CHECK(Rational(3, 4) * Rational(2, 3) == Rational(1, 2));
  CHECK(Rational(3, 4) / Rational(3, 2) == Rational(1, 2));
  CHECK(-Rational(1, 3) == Rational(-1, 3));

  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(-1, 3));
  CHECK(Rational(7).is_integer());
  CHECK_FALSE(Rational(7, 2).is_integer());
}

TEST_CASE("rational errors") {
  CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(Rational(1, 2) / Rational(0), std::invalid_argument);
}

TEST_CASE("rational text round trip") {
  CHECK(Rational(231).to_string() == "231");
  CHECK(Rational(-105, 8).to_string() == "-105/8");
  CHECK(Rational(105, 192).to_string() == "35/64");

  CHECK(Rational::parse("33") == Rational(33));
  CHECK(Rational::parse("-105/8") == Rational(-105, 8));
  CHECK(Rational::parse(" 7/2 ") == Rational(7, 2));
  CHECK_FALSE(Rational::parse("abc").has_value());
  CHECK_FALSE(Rational::parse("1/0").has_value());
  CHECK_FALSE(Rational::parse("").has_value());
}
