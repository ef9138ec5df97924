#include <doctest.h>

#include "lor/ara.hpp"

using lor::Ara;

TEST_CASE("parse and canonical formatting") {
  CHECK(Ara::parse("0.45").micro() == 450'000);
  CHECK(Ara::parse("1").micro() == 1'000'000);
  CHECK(Ara::parse("-3.2").micro() == -3'200'000);
  CHECK(Ara::parse("0.000001").micro() == 1);
  CHECK(Ara::parse("1.35").str() == "1.350000");
  CHECK(Ara::parse("-0.5").str() == "-0.500000");
  CHECK(Ara::zero().str() == "0.000000");

  CHECK_THROWS_AS(Ara::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(Ara::parse("1.2345678"), std::invalid_argument);
  CHECK_THROWS_AS(Ara::parse("abc"), std::invalid_argument);
  CHECK_THROWS_AS(Ara::parse("1."), std::invalid_argument);
  CHECK_THROWS_AS(Ara::parse("1.5x"), std::invalid_argument);
}

TEST_CASE("exact arithmetic") {
  CHECK((Ara::parse("1.0") + Ara::parse("2.5")).str() == "3.500000");

  // A thousand micro-coins sum with no drift.
  Ara total;
  for (int i = 0; i < 1000; ++i) total += Ara::parse("0.000001");
  CHECK(total == Ara::parse("0.001"));
  CHECK(total.micro() == 1000);

  CHECK((Ara::from_units(3) * 4).micro() == 12'000'000);
  CHECK((-Ara::from_units(2)).micro() == -2'000'000);
}

TEST_CASE("ppm multiplication truncates toward zero") {
  CHECK(Ara::from_units(3).mul_ppm(900'000) == Ara::parse("2.7"));
  CHECK(Ara::from_micro(1).mul_ppm(500'000).micro() == 0);
  CHECK(Ara::from_units(1).mul_div(1, 3).micro() == 333'333);
  CHECK_THROWS_AS(Ara::from_units(1).mul_div(1, 0), std::invalid_argument);
}

TEST_CASE("overflow detected") {
  const Ara top = Ara::from_micro(INT64_MAX);
  CHECK_THROWS_AS(top + Ara::from_micro(1), std::overflow_error);
  CHECK_THROWS_AS(top * 2, std::overflow_error);
}
