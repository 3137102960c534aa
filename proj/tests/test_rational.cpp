#include <doctest.h>

#include <stdexcept>

#include "fracsim/errors.hpp"
#include "fracsim/rational.hpp"

using namespace fracsim;

TEST_SUITE("rational") {
  TEST_CASE("fractions reduce and compare exactly") {
    const Rational a(6, -8);
    CHECK(a.num() == -3);
    CHECK(a.den() == 4);
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(compare(Rational(2, 3), Rational(3, 5)) > 0);
    CHECK(Rational(7, 3).str() == "7/3");
  }

  TEST_CASE("decimal and slash syntax parse to exact values") {
    const Number half = Number::parse("1/2");
    REQUIRE(half.is_exact());
    CHECK(*half.exact == Rational(1, 2));
    const Number q = Number::parse("0.55");
    REQUIRE(q.is_exact());
    CHECK(*q.exact == Rational(11, 20));
    CHECK(Number::parse("-3/4").value == -0.75);
    CHECK(Number::parse("1e-3").value == doctest::Approx(1e-3));
  }

  TEST_CASE("malformed input is rejected") {
    CHECK_THROWS_AS(Number::parse(""), Error);
    CHECK_THROWS_AS(Number::parse("abc"), Error);
    CHECK_THROWS_AS(Number::parse("1/0"), Error);
    CHECK_THROWS_AS(Number::parse("2x"), Error);
  }

  TEST_CASE("exactness survives arithmetic and drops on overflow") {
    const Number a = Number::parse("2/3"), b = Number::parse("1/6");
    const Number c = a * b + Number(1);
    REQUIRE(c.is_exact());
    CHECK(*c.exact == Rational(10, 9));
    const Number big(Rational(INT64_MAX / 2, 1));
    const Number prod = big * big;
    CHECK_FALSE(prod.is_exact());
    CHECK(prod.value == doctest::Approx(static_cast<double>(INT64_MAX / 2) * (INT64_MAX / 2)));
    CHECK_THROWS_AS(Rational(INT64_MAX, 1) + Rational(INT64_MAX, 1), std::overflow_error);
  }

  TEST_CASE("mixed comparisons use the tolerance") {
    CHECK(compare(Number(0.5 + 1e-14), Number::parse("1/2")) == 0);
    CHECK(compare(Number(0.5 + 1e-14), Number::parse("1/2"), 0.0) > 0);
    const Number d = Number::from_double(0.1);
    REQUIRE(d.is_exact());
    CHECK(d.value == 0.1);
    CHECK(compare(d, Number::parse("1/10")) != 0);
  }
}
