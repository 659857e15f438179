#include "doctest.h"
#include "qfano/rational.hpp"

using qfano::Rational;

TEST_CASE("arithmetic stays reduced")
{
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(1, -3) == Rational(-1, 3));
    CHECK(Rational(3, 2) + Rational(8, 3) + Rational(168, 13) == Rational(1333, 78));
    CHECK(Rational(1, 6) * Rational(3) == Rational(1, 2));
    CHECK(Rational(1, 2) / Rational(1, 4) == Rational(2));
    CHECK(Rational(0) * Rational(5, 7) == Rational(0));
}

TEST_CASE("floor, ceil and fractional part")
{
    CHECK(Rational(-1, 3).floor() == -1);
    CHECK(Rational(7, 3).floor() == 2);
    CHECK(Rational(7, 3).ceil() == 3);
    CHECK(Rational(-7, 3).frac() == Rational(2, 3));
    CHECK(Rational(-6, 3).ceil() == -2);
}

TEST_CASE("ordering")
{
    CHECK(Rational(1, 78) < Rational(1, 77));
    CHECK(Rational(-1, 2) < Rational(0));
    CHECK(Rational(5, 10) == Rational(1, 2));
}

TEST_CASE("parsing and rendering")
{
    CHECK(Rational::parse("1/78") == Rational(1, 78));
    CHECK(Rational::parse(" -4/6 ") == Rational(-2, 3));
    CHECK(Rational::parse("12") == Rational(12));
    CHECK(Rational(12).to_fraction_string() == "12/1");
    CHECK(Rational(0).to_fraction_string() == "0/1");
    CHECK(Rational(2, 11).to_string() == "2/11");
    CHECK_THROWS_AS(Rational::parse("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("a/3"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse(""), std::invalid_argument);
}

TEST_CASE("overflow throws instead of wrapping")
{
    const Rational big(INT64_MAX / 2);
    CHECK_THROWS_AS(big * Rational(4), std::overflow_error);
    CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
}

TEST_CASE("modular helpers")
{
    CHECK(qfano::mod_inverse(7, 13) == 2);
    CHECK(qfano::mod_inverse(4, 11) == 3);
    CHECK(qfano::mod_floor(-3, 13) == 10);
}
