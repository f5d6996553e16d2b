#pragma once

#include <gmpxx.h>

#include <compare>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace osva {

/// Raised on division by zero and similar field errors.
class ArithmeticError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Exact rational number, always kept in lowest terms with a positive
/// denominator. Backed by GMP's mpq_class.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : v_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(long num, long den);
  explicit Rational(const mpq_class& value) : v_(value) { v_.canonicalize(); }

  /// Parses "p", "-p" or "p/q". Throws std::invalid_argument on bad input.
  static Rational parse(std::string_view text);
  /// Exact value of a finite double (every double is a dyadic rational).
  static Rational from_double(double value);

  std::string to_string() const;
  double to_double() const { return v_.get_d(); }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }
  /// Largest integer <= value.
  mpz_class floor() const;
  /// value - floor(value), in [0, 1).
  Rational fractional_part() const;
  /// Integer value; throws if not an integer or out of range of long.
  long to_long() const;

  const mpq_class& raw() const { return v_; }
  mpz_class numerator() const { return v_.get_num(); }
  mpz_class denominator() const { return v_.get_den(); }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.to_string();
  }

 private:
  mpq_class v_{0};
};

Rational abs(const Rational& r);
/// r^e for integer e; e < 0 requires r != 0.
Rational pow(const Rational& r, long e);
/// n! as a rational.
Rational factorial(long n);
/// Generalized binomial coefficient binom(x, k) for integer x and k >= 0.
Rational binomial(long x, long k);

/// Element a + b*sqrt(2) of the field Q(sqrt 2). Equality is component-wise,
/// which is exact because sqrt(2) is irrational.
class QSqrt2 {
 public:
  QSqrt2() = default;
  QSqrt2(long a) : a_(a) {}  // NOLINT(google-explicit-constructor)
  QSqrt2(Rational a) : a_(std::move(a)) {}  // NOLINT(google-explicit-constructor)
  QSqrt2(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {}

  static QSqrt2 sqrt2() { return {Rational(0), Rational(1)}; }

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }

  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
  bool is_rational() const { return b_.is_zero(); }
  /// Galois conjugate a - b*sqrt(2).
  QSqrt2 conjugate() const { return {a_, -b_}; }
  /// Field norm a^2 - 2 b^2.
  Rational norm() const { return a_ * a_ - Rational(2) * b_ * b_; }
  QSqrt2 inverse() const;

  /// Correctly rounded double value of a + b*sqrt(2).
  double to_double() const;
  std::string to_string() const;

  QSqrt2 operator-() const { return {-a_, -b_}; }
  QSqrt2& operator+=(const QSqrt2& o) { a_ += o.a_; b_ += o.b_; return *this; }
  QSqrt2& operator-=(const QSqrt2& o) { a_ -= o.a_; b_ -= o.b_; return *this; }
  QSqrt2& operator*=(const QSqrt2& o);
  QSqrt2& operator/=(const QSqrt2& o) { return *this *= o.inverse(); }

  friend QSqrt2 operator+(QSqrt2 x, const QSqrt2& y) { return x += y; }
  friend QSqrt2 operator-(QSqrt2 x, const QSqrt2& y) { return x -= y; }
  friend QSqrt2 operator*(QSqrt2 x, const QSqrt2& y) { return x *= y; }
  friend QSqrt2 operator/(QSqrt2 x, const QSqrt2& y) { return x /= y; }
  friend bool operator==(const QSqrt2& x, const QSqrt2& y) = default;

  friend std::ostream& operator<<(std::ostream& os, const QSqrt2& x) {
    return os << x.to_string();
  }

 private:
  Rational a_;
  Rational b_;
};

enum class FieldOp { add, sub, mul, div };

/// Dispatches one of the four field operations; div by zero throws ArithmeticError.
QSqrt2 field_arith(const QSqrt2& x, const QSqrt2& y, FieldOp op);

}  // namespace osva
