#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wz/rational.hpp"

using wz::Rational;

TEST_CASE("arithmetic and reduction") {
    Rational a(1, 2), b(1, 3);
    CHECK(a + b == Rational(5, 6));
    CHECK(a - b == Rational(1, 6));
    CHECK(a * b == Rational(1, 6));
    CHECK(a / b == Rational(3, 2));
    CHECK(Rational(4, 8) == Rational(1, 2));
    CHECK(Rational(-4, -8) == Rational(1, 2));
    CHECK(Rational(4, -8) == Rational(-1, 2));
    CHECK((-a).num() == -1);
}

TEST_CASE("ordering") {
    CHECK(Rational(-51, 20) < Rational(-5, 2));
    CHECK(Rational(-18, 7) < Rational(-51, 20));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(0) <= Rational(0));
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
    CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
}

TEST_CASE("to_double") {
    CHECK(Rational(-51, 20).to_double() == doctest::Approx(-2.55));
}
