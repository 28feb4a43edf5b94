#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>

#include "radsum/rational.hpp"

using radsum::Rational;

TEST_CASE("parsing: rationals, integers, terminating decimals") {
  CHECK(*Rational::parse("1/4") == Rational(1, 4));
  CHECK(*Rational::parse("0.25") == Rational(1, 4));
  CHECK(*Rational::parse("-0.125") == Rational(-1, 8));
  CHECK(*Rational::parse("3") == Rational(3, 1));
  CHECK(*Rational::parse("  -7/21 ") == Rational(-1, 3));
  CHECK(*Rational::parse("2.50") == Rational(5, 2));
  CHECK(!Rational::parse(""));
  CHECK(!Rational::parse("abc"));
  CHECK(!Rational::parse("1/0"));
  CHECK(!Rational::parse("1e-3"));  // exponent forms are not exact ingestion
  CHECK(!Rational::parse("1/2/3"));
}

TEST_CASE("normalization and arithmetic") {
  Rational a(2, -4);
  CHECK(a.num() == -1);
  CHECK(a.den() == 2);
  CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
  CHECK((Rational(1, 2) - Rational(1, 2)).is_zero());
  CHECK((Rational(2, 3) * Rational(3, 4)) == Rational(1, 2));
  CHECK(Rational(-3, 7).abs() == Rational(3, 7));
  CHECK(Rational(1, 3).value() == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("exact comparison never overflows") {
  Rational big1(6074001000LL, 6074001001LL);
  Rational big2(6074001001LL, 6074001002LL);
  CHECK(big1 < big2);
  CHECK(big2 > big1);
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(-1, 3));
}

TEST_CASE("overflow is detected, not wrapped") {
  Rational huge(UINT64_C(1) << 62, 1);
  CHECK(!huge.try_mul(huge));
  CHECK(!huge.try_add(Rational(1, (UINT64_C(1) << 62) - 1)));
  CHECK_THROWS_AS(huge * huge, std::overflow_error);
}

TEST_CASE("exact dyadic doubles round-trip") {
  CHECK(*Rational::from_double_exact(0.25) == Rational(1, 4));
  CHECK(*Rational::from_double_exact(-1.5) == Rational(-3, 2));
  CHECK(*Rational::from_double_exact(0.0) == Rational(0, 1));
  CHECK(*Rational::from_double_exact(3.0) == Rational(3, 1));
  double third = 1.0 / 3.0;
  auto r = Rational::from_double_exact(third);
  REQUIRE(r.has_value());
  CHECK(r->value() == third);  // exact for the double itself
  CHECK(!Rational::from_double_exact(1e300));
  CHECK(!Rational::from_double_exact(std::nan("")));
}

TEST_CASE("checked helpers") {
  CHECK(radsum::gcd64(12, -18) == 6);
  CHECK(*radsum::checked_lcm(4, 6) == 12);
  CHECK(!radsum::checked_mul(INT64_MAX, 2));
  CHECK(!radsum::checked_add(INT64_MAX, 1));
}
