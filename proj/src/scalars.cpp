#include "osva/scalars.hpp"

#include <cmath>
#include <limits>

namespace osva {

Rational::Rational(long num, long den) {
  if (den == 0) throw ArithmeticError("rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  auto bad = [&]() { return std::invalid_argument("malformed rational '" + s + "'"); };
  if (s.empty()) throw bad();
  auto slash = s.find('/');
  auto valid_int = [](const std::string& t, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && !t.empty() && (t[0] == '-' || t[0] == '+')) i = 1;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num, true) || !valid_int(den, false)) throw bad();
  if (num[0] == '+') num.erase(0, 1);
  mpz_class n(num, 10), d(den, 10);
  if (d == 0) throw ArithmeticError("rational with zero denominator: '" + s + "'");
  return Rational(mpq_class(n, d));
}

Rational Rational::from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite double");
  mpq_class q;
  mpq_set_d(q.get_mpq_t(), value);
  return Rational(q);
}

std::string Rational::to_string() const {
  if (v_.get_den() == 1) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

mpz_class Rational::floor() const {
  mpz_class out;
  mpz_fdiv_q(out.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return out;
}

Rational Rational::fractional_part() const {
  return *this - Rational(mpq_class(floor()));
}

long Rational::to_long() const {
  if (!is_integer() || !v_.get_num().fits_slong_p())
    throw std::out_of_range("rational " + to_string() + " is not a machine integer");
  return v_.get_num().get_si();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw ArithmeticError("division by zero");
  v_ /= o.v_;
  return *this;
}

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

Rational pow(const Rational& r, long e) {
  if (e < 0) {
    if (r.is_zero()) throw ArithmeticError("zero to a negative power");
    return Rational(1) / pow(r, -e);
  }
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), r.raw().get_num_mpz_t(), static_cast<unsigned long>(e));
  mpz_pow_ui(den.get_mpz_t(), r.raw().get_den_mpz_t(), static_cast<unsigned long>(e));
  return Rational(mpq_class(num, den));
}

Rational factorial(long n) {
  if (n < 0) throw std::invalid_argument("negative factorial");
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return Rational(mpq_class(f));
}

Rational binomial(long x, long k) {
  if (k < 0) return Rational(0);
  Rational out(1);
  for (long i = 0; i < k; ++i) out *= Rational(x - i, i + 1);
  return out;
}

QSqrt2& QSqrt2::operator*=(const QSqrt2& o) {
  Rational a = a_ * o.a_ + Rational(2) * b_ * o.b_;
  Rational b = a_ * o.b_ + b_ * o.a_;
  a_ = std::move(a);
  b_ = std::move(b);
  return *this;
}

QSqrt2 QSqrt2::inverse() const {
  if (is_zero()) throw ArithmeticError("division by zero in Q(sqrt 2)");
  Rational n = norm();
  return {a_ / n, -b_ / n};
}

double QSqrt2::to_double() const {
  if (b_.is_zero()) return a_.to_double();
  // Evaluate at 256 bits, then pick the nearer of the two neighbouring doubles.
  constexpr unsigned long kBits = 256;
  mpf_class two(2, kBits), root(0, kBits);
  mpf_sqrt(root.get_mpf_t(), two.get_mpf_t());
  mpf_class a(a_.raw(), kBits), b(b_.raw(), kBits);
  mpf_class value = a + b * root;
  double d = value.get_d();  // truncates toward zero
  double up = std::nextafter(d, value > 0 ? std::numeric_limits<double>::infinity()
                                          : -std::numeric_limits<double>::infinity());
  mpf_class err_d = abs(value - mpf_class(d, kBits));
  mpf_class err_up = abs(value - mpf_class(up, kBits));
  return err_up < err_d ? up : d;
}

std::string QSqrt2::to_string() const {
  if (b_.is_zero()) return a_.to_string();
  std::string s = a_.is_zero() ? "" : a_.to_string() + (b_.sign() > 0 ? "+" : "");
  return s + b_.to_string() + "*sqrt2";
}

QSqrt2 field_arith(const QSqrt2& x, const QSqrt2& y, FieldOp op) {
  switch (op) {
    case FieldOp::add: return x + y;
    case FieldOp::sub: return x - y;
    case FieldOp::mul: return x * y;
    case FieldOp::div: return x / y;
  }
  throw std::invalid_argument("unknown field operation");
}

}  // namespace osva
