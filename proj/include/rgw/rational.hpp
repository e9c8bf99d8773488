#pragma once

// Exact rationals, kept in lowest terms with a positive denominator.
// Backed by GMP; the wrapper adds explicit division-by-zero signaling and
// the conversions the rest of the library needs.

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>

#include "rgw/ext_real.hpp"

namespace rgw {

class Rational {
 public:
  Rational() = default;
  template <std::integral I>
  Rational(I v) : q_(static_cast<long>(v)) {}  // NOLINT(google-explicit-constructor)
  Rational(long num, long den);
  explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }
  Rational(const mpz_class& num, const mpz_class& den);

  // Exact value of a finite double.
  static Rational from_double(double x);
  // Exact value of hi + lo.
  static Rational from_ext(const ExtReal& x);

  mpz_class num() const { return q_.get_num(); }
  mpz_class den() const { return q_.get_den(); }
  const mpq_class& mpq() const { return q_; }

  int sign() const { return sgn(q_); }
  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }

  // Nearest double-double (error below 2^-106 relative).
  ExtReal to_ext() const;
  double to_double() const { return to_ext().to_double(); }

  // Bits held by numerator and denominator; used for memory budgets.
  std::size_t size_in_bits() const;

  Rational operator-() const { return Rational(mpq_class(-q_)); }
  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(mpq_class(a.q_ + b.q_));
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(mpq_class(a.q_ - b.q_));
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(mpq_class(a.q_ * b.q_));
  }
  // Throws DivisionByZero.
  friend Rational operator/(const Rational& a, const Rational& b);

  Rational& operator+=(const Rational& b) {
    q_ += b.q_;
    return *this;
  }
  Rational& operator-=(const Rational& b) {
    q_ -= b.q_;
    return *this;
  }
  Rational& operator*=(const Rational& b) {
    q_ *= b.q_;
    return *this;
  }
  Rational& operator/=(const Rational& b) { return *this = *this / b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class q_;
};

enum class RatOp { kAdd, kSub, kMul, kDiv };
Rational rat_arith(RatOp op, const Rational& a, const Rational& b);

Rational abs(const Rational& x);
Rational pow(const Rational& x, long n);
Rational binomial(unsigned long n, unsigned long k);
Rational factorial(unsigned long n);

// Accepts integers, decimals with optional exponent ("0.4375", "-1.5e-3")
// and fractions ("7/16"). Throws ValidationError on malformed input.
Rational parse_rational(std::string_view text);

// "p/q" (or "p" for integers).
std::string to_fraction_string(const Rational& x);
// Correctly rounded decimal with `digits` significant digits.
std::string to_decimal_string(const Rational& x, int digits);

std::ostream& operator<<(std::ostream& os, const Rational& x);

}  // namespace rgw
