#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "butterfly/format.hpp"
#include "butterfly/rational.hpp"

using butterfly::Rational;

TEST_CASE("rational construction enforces reduced form in [0, 1]") {
  CHECK(Rational(2, 7).p() == 2);
  CHECK(Rational(2, 7).q() == 7);
  CHECK_THROWS_AS(Rational(2, 4), std::invalid_argument);
  CHECK_THROWS_AS(Rational(3, 2), std::invalid_argument);
  CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(Rational(-1, 3), std::invalid_argument);
  CHECK(Rational::reduced(6, 21) == Rational(2, 7));
  CHECK(Rational::reduced(0, 5) == Rational(0, 1));
  CHECK(Rational::reduced(4, 4) == Rational(1, 1));
}

TEST_CASE("rational parse and print round trip") {
  for (const char* text : {"0/1", "1/1", "2/7", "13/47"}) CHECK(Rational::parse(text).str() == text);
  CHECK(Rational::parse("1") == Rational(1, 1));
  CHECK_THROWS(Rational::parse("2/x"));
  CHECK_THROWS(Rational::parse("4/8"));
  CHECK_THROWS(Rational::parse(""));
}

TEST_CASE("rational ordering agrees with real ordering") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> den(1, 200);
  for (int i = 0; i < 2000; ++i) {
    const std::int64_t qa = den(rng), qb = den(rng);
    const Rational a = Rational::reduced(std::uniform_int_distribution<std::int64_t>(0, qa)(rng), qa);
    const Rational b = Rational::reduced(std::uniform_int_distribution<std::int64_t>(0, qb)(rng), qb);
    CHECK((a < b) == (a.p() * b.q() < b.p() * a.q()));
    CHECK((a == b) == (a.p() == b.p() && a.q() == b.q()));
  }
}

TEST_CASE("scientific format matches printf %.12e") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> mag(-12.0, 12.0);
  char buf[64];
  for (int i = 0; i < 2000; ++i) {
    const double v = (i % 2 ? -1.0 : 1.0) * std::pow(10.0, mag(rng));
    std::snprintf(buf, sizeof buf, "%.12e", v);
    CHECK(butterfly::format_sci12(v) == buf);
  }
  CHECK(butterfly::format_sci12(-3.876300213013) == "-3.876300213013e+00");
  CHECK(butterfly::format_sci12(0.16) == "1.600000000000e-01");
  CHECK(butterfly::format_sci12(0.0) == "0.000000000000e+00");
  CHECK(butterfly::format_sci12(-0.0) == "0.000000000000e+00");
  CHECK(butterfly::format_sci12(1e-100) == "1.000000000000e-100");
}

TEST_CASE("shortest format round trips") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 2000; ++i) {
    const double v = u(rng);
    CHECK(butterfly::parse_double(butterfly::format_shortest(v)) == v);
  }
  CHECK(butterfly::format_shortest(2.0) == "2");
}

TEST_CASE("postscript numbers drop the leading zero") {
  CHECK(butterfly::format_ps_number(100.0) == "100");
  CHECK(butterfly::format_ps_number(0.0005) == ".0005");
  CHECK(butterfly::format_ps_number(-0.25) == "-.25");
  CHECK(butterfly::format_ps_number(0.0) == "0");
}

TEST_CASE("strict number parsing") {
  CHECK(butterfly::parse_double("+1.5") == 1.5);
  CHECK(butterfly::parse_double("-3.876300213013e+00") == -3.876300213013);
  CHECK_THROWS_AS(butterfly::parse_double("1.5x"), std::invalid_argument);
  CHECK_THROWS_AS(butterfly::parse_double(""), std::invalid_argument);
  CHECK_THROWS_AS(butterfly::parse_double(" 1"), std::invalid_argument);
}
