#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "osva/fusion.hpp"
#include "osva/scalars.hpp"

#include <cmath>
#include <random>

using namespace osva;

namespace {

QSqrt2 random_element(std::mt19937& rng) {
  std::uniform_int_distribution<long> num(-40, 40), den(1, 12);
  return {Rational(num(rng), den(rng)), Rational(num(rng), den(rng))};
}

}  // namespace

TEST_CASE("field arithmetic examples") {
  const QSqrt2 inv_root2(Rational(0), Rational(1, 2));
  CHECK(field_arith(inv_root2, inv_root2, FieldOp::mul) == QSqrt2(Rational(1, 2)));
  CHECK(field_arith(QSqrt2(1, 1), QSqrt2(1, -1), FieldOp::mul) == QSqrt2(-1));
  CHECK(field_arith(QSqrt2(1), QSqrt2::sqrt2(), FieldOp::div) == inv_root2);
  CHECK(field_arith(QSqrt2(3), QSqrt2(Rational(1, 2)), FieldOp::sub) == QSqrt2(Rational(5, 2)));
}

TEST_CASE("division by zero is an arithmetic error") {
  CHECK_THROWS_AS(field_arith(QSqrt2(1), QSqrt2(0), FieldOp::div), ArithmeticError);
  CHECK_THROWS_AS(Rational(1) / Rational(0), ArithmeticError);
  CHECK_THROWS_AS(Rational::parse("1/0"), ArithmeticError);
}

TEST_CASE("to_double") {
  CHECK(QSqrt2::sqrt2().to_double() == doctest::Approx(1.4142135623730951).epsilon(1e-12));
  CHECK(QSqrt2(Rational(1, 2)).to_double() == 0.5);
  CHECK(QSqrt2(Rational(0), Rational(1, 2)).to_double() == doctest::Approx(0.7071067811865476).epsilon(1e-12));
  // 99 - 70 sqrt2 suffers cancellation in naive evaluation.
  double exact = 1.0 / (99.0 + 70.0 * std::sqrt(2.0));
  double got = QSqrt2(99, -70).to_double();
  CHECK(std::abs(got - exact) <= 4 * std::abs(std::nextafter(exact, 1.0) - exact));
}

TEST_CASE("is_zero") {
  CHECK(QSqrt2(0, 0).is_zero());
  CHECK_FALSE(QSqrt2(1, -1).is_zero());
  CHECK((QSqrt2(Rational(2, 4)) - QSqrt2(Rational(1, 2))).is_zero());
}

TEST_CASE("rational parsing and canonical form") {
  CHECK(Rational::parse("2/4") == Rational(1, 2));
  CHECK(Rational::parse("-3/6").to_string() == "-1/2");
  CHECK(Rational::parse("7").to_string() == "7");
  CHECK(Rational::parse("0/5").to_string() == "0");
  CHECK(Rational(3, -6).denominator() == 2);
  CHECK_THROWS_AS(Rational::parse("1/x"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("1/-2"), std::invalid_argument);
  // Normalizing twice equals normalizing once.
  Rational r = Rational::parse("-12/18");
  CHECK(Rational::parse(r.to_string()) == r);
  CHECK(Rational::parse(r.to_string()).to_string() == r.to_string());
}

TEST_CASE("exact double conversion and helpers") {
  CHECK(Rational::from_double(0.375) == Rational(3, 8));
  CHECK(Rational::from_double(-2.0) == Rational(-2));
  CHECK(pow(Rational(2, 3), -2) == Rational(9, 4));
  CHECK(factorial(5) == Rational(120));
  CHECK(binomial(-2, 3) == Rational(-4));  // (-2)(-3)(-4)/6
  CHECK(binomial(5, 2) == Rational(10));
  CHECK(Rational(-7, 2).floor() == -4);
  CHECK(Rational(-7, 2).fractional_part() == Rational(1, 2));
}

TEST_CASE("field laws hold exactly on random operands") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    QSqrt2 x = random_element(rng), y = random_element(rng), z = random_element(rng);
    CHECK((x + y) + z == x + (y + z));
    CHECK((x * y) * z == x * (y * z));
    CHECK(x * (y + z) == x * y + x * z);
    CHECK(x * y == y * x);
    if (!x.is_zero()) CHECK(x * x.inverse() == QSqrt2(1));
    if (!y.is_zero()) CHECK((x / y) * y == x);
  }
}

TEST_CASE("float image of exact arithmetic agrees with double arithmetic") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<long> num(-1000, 1000), den(1, 9);
  for (int trial = 0; trial < 300; ++trial) {
    QSqrt2 x(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)));
    QSqrt2 y(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)));
    const double xd = x.to_double(), yd = y.to_double();
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-10 * std::max({std::abs(a), std::abs(b), 1.0}); };
    CHECK(close((x + y).to_double(), xd + yd));
    CHECK(close((x - y).to_double(), xd - yd));
    CHECK(close((x * y).to_double(), xd * yd));
    if (!y.is_zero() && std::abs(yd) > 1e-3) CHECK(close((x / y).to_double(), xd / yd));
  }
}

TEST_CASE("json encoding round-trips bit-exactly") {
  QSqrt2 x(Rational(-3, 7), Rational(1, 2));
  auto j = qsqrt2_to_json(x);
  CHECK(j.dump() == R"({"a":"-3/7","b":"1/2"})");
  CHECK(qsqrt2_from_json(j, "$") == x);
  CHECK(qsqrt2_from_json(nlohmann::json::parse(R"({"a":"0","b":"1/2"})"), "$") == QSqrt2(Rational(0), Rational(1, 2)));
  CHECK_THROWS_AS(qsqrt2_from_json(nlohmann::json::parse(R"({"a":"0"})"), "$.v"), FusionParseError);
}
