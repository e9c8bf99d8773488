#pragma once

// Double-double real arithmetic: a value is the unevaluated sum hi + lo of
// two IEEE doubles with |lo| <= ulp(hi)/2, giving 106 significand bits
// (about 32 decimal digits).
//
// The error-free transformations follow Dekker (1971) and the QD library of
// Hida, Li and Bailey. They require strict IEEE evaluation: the library is
// built with -ffp-contract=off and must never see -ffast-math.

#include <cmath>
#include <compare>
#include <concepts>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <string_view>

namespace rgw {

namespace eft {

inline double two_sum(double a, double b, double& err) {
  const double s = a + b;
  const double bb = s - a;
  err = (a - (s - bb)) + (b - bb);
  return s;
}

// Requires |a| >= |b| (or a == 0).
inline double quick_two_sum(double a, double b, double& err) {
  const double s = a + b;
  err = b - (s - a);
  return s;
}

inline double two_prod(double a, double b, double& err) {
  const double p = a * b;
  err = std::fma(a, b, -p);
  return p;
}

}  // namespace eft

class ExtReal {
 public:
  constexpr ExtReal() = default;
  constexpr ExtReal(double x) : hi_(x) {}  // NOLINT(google-explicit-constructor)

  template <std::integral I>
  ExtReal(I v) {  // NOLINT(google-explicit-constructor)
    if constexpr (sizeof(I) < 8) {
      hi_ = static_cast<double>(v);
    } else {
      // 64-bit integers may exceed the 53-bit significand; split exactly.
      const double h = static_cast<double>(v);
      const auto rest = static_cast<long double>(v) - static_cast<long double>(h);
      hi_ = eft::quick_two_sum(h, static_cast<double>(rest), lo_);
    }
  }

  // Renormalizes an arbitrary pair.
  static ExtReal from_parts(double hi, double lo) {
    ExtReal r;
    r.hi_ = eft::two_sum(hi, lo, r.lo_);
    return r;
  }

  constexpr double hi() const { return hi_; }
  constexpr double lo() const { return lo_; }
  constexpr double to_double() const { return hi_ + lo_; }
  explicit constexpr operator double() const { return hi_ + lo_; }

  bool is_finite() const { return std::isfinite(hi_); }
  bool is_zero() const { return hi_ == 0.0; }

  ExtReal operator-() const {
    ExtReal r;
    r.hi_ = -hi_;
    r.lo_ = -lo_;
    return r;
  }

  friend ExtReal operator+(const ExtReal& a, const ExtReal& b) {
    double s2, t2;
    double s1 = eft::two_sum(a.hi_, b.hi_, s2);
    const double t1 = eft::two_sum(a.lo_, b.lo_, t2);
    s2 += t1;
    s1 = eft::quick_two_sum(s1, s2, s2);
    s2 += t2;
    ExtReal r;
    r.hi_ = eft::quick_two_sum(s1, s2, r.lo_);
    return r;
  }

  friend ExtReal operator+(const ExtReal& a, double b) {
    double s2;
    const double s1 = eft::two_sum(a.hi_, b, s2);
    s2 += a.lo_;
    ExtReal r;
    r.hi_ = eft::quick_two_sum(s1, s2, r.lo_);
    return r;
  }
  friend ExtReal operator+(double a, const ExtReal& b) { return b + a; }

  friend ExtReal operator-(const ExtReal& a, const ExtReal& b) { return a + (-b); }
  friend ExtReal operator-(const ExtReal& a, double b) { return a + (-b); }
  friend ExtReal operator-(double a, const ExtReal& b) { return (-b) + a; }

  friend ExtReal operator*(const ExtReal& a, const ExtReal& b) {
    double p2;
    const double p1 = eft::two_prod(a.hi_, b.hi_, p2);
    p2 += a.hi_ * b.lo_ + a.lo_ * b.hi_;
    ExtReal r;
    r.hi_ = eft::quick_two_sum(p1, p2, r.lo_);
    return r;
  }

  friend ExtReal operator*(const ExtReal& a, double b) {
    double p2;
    const double p1 = eft::two_prod(a.hi_, b, p2);
    p2 += a.lo_ * b;
    ExtReal r;
    r.hi_ = eft::quick_two_sum(p1, p2, r.lo_);
    return r;
  }
  friend ExtReal operator*(double a, const ExtReal& b) { return b * a; }

  // Division does not check for zero; use checked_div for the signaling form.
  friend ExtReal operator/(const ExtReal& a, const ExtReal& b) {
    const double q1 = a.hi_ / b.hi_;
    ExtReal r = a - b * q1;
    const double q2 = r.hi_ / b.hi_;
    r = r - b * q2;
    const double q3 = r.hi_ / b.hi_;
    ExtReal q;
    q.hi_ = eft::quick_two_sum(q1, q2, q.lo_);
    return q + q3;
  }

  friend ExtReal operator/(const ExtReal& a, double b) {
    const double q1 = a.hi_ / b;
    double p2;
    const double p1 = eft::two_prod(q1, b, p2);
    double e;
    const double s = eft::two_sum(a.hi_, -p1, e);
    e -= p2;
    e += a.lo_;
    const double q2 = (s + e) / b;
    ExtReal r;
    r.hi_ = eft::quick_two_sum(q1, q2, r.lo_);
    // One correction step keeps the quotient within a few ulps of 2^-106.
    const ExtReal rem = a - r * b;
    return r + rem.hi_ / b;
  }
  friend ExtReal operator/(double a, const ExtReal& b) { return ExtReal(a) / b; }

  ExtReal& operator+=(const ExtReal& b) { return *this = *this + b; }
  ExtReal& operator-=(const ExtReal& b) { return *this = *this - b; }
  ExtReal& operator*=(const ExtReal& b) { return *this = *this * b; }
  ExtReal& operator/=(const ExtReal& b) { return *this = *this / b; }
  ExtReal& operator+=(double b) { return *this = *this + b; }
  ExtReal& operator-=(double b) { return *this = *this - b; }
  ExtReal& operator*=(double b) { return *this = *this * b; }
  ExtReal& operator/=(double b) { return *this = *this / b; }

  friend bool operator==(const ExtReal& a, const ExtReal& b) {
    return a.hi_ == b.hi_ && a.lo_ == b.lo_;
  }
  friend std::partial_ordering operator<=>(const ExtReal& a, const ExtReal& b) {
    if (auto c = a.hi_ <=> b.hi_; c != 0) return c;
    return a.lo_ <=> b.lo_;
  }

  // Square, cheaper than x*x.
  ExtReal sqr() const {
    double p2;
    const double p1 = eft::two_prod(hi_, hi_, p2);
    p2 += 2.0 * hi_ * lo_;
    p2 += lo_ * lo_;
    ExtReal r;
    r.hi_ = eft::quick_two_sum(p1, p2, r.lo_);
    return r;
  }

  // x * 2^e, exact.
  ExtReal ldexp(int e) const {
    ExtReal r;
    r.hi_ = std::ldexp(hi_, e);
    r.lo_ = std::ldexp(lo_, e);
    return r;
  }

 private:
  double hi_ = 0.0;
  double lo_ = 0.0;
};

inline ExtReal abs(const ExtReal& x) { return x.hi() < 0.0 ? -x : x; }
inline bool signbit(const ExtReal& x) { return std::signbit(x.hi()); }

// Nearest integer (ties away from zero) as a double-double.
ExtReal nint(const ExtReal& x);
ExtReal floor(const ExtReal& x);

// add/sub/mul/div with explicit division-by-zero signaling.
enum class ArithOp { kAdd, kSub, kMul, kDiv };
ExtReal ext_arith(ArithOp op, const ExtReal& a, const ExtReal& b);
ExtReal checked_div(const ExtReal& a, const ExtReal& b);

// Elementary functions, relative error well below 1e-28 on their domains.
// Domain violations throw DomainError.
ExtReal sqrt(const ExtReal& x);
ExtReal exp(const ExtReal& x);
ExtReal log(const ExtReal& x);
ExtReal expm1(const ExtReal& x);
ExtReal log1p(const ExtReal& x);
ExtReal pow(const ExtReal& x, const ExtReal& y);  // x > 0
ExtReal pow(const ExtReal& x, long n);           // integer power by squaring
ExtReal sin(const ExtReal& x);
ExtReal cos(const ExtReal& x);
void sincos(const ExtReal& x, ExtReal& s, ExtReal& c);
ExtReal atan2(const ExtReal& y, const ExtReal& x);

enum class ElemFn { kLn, kExp, kSqrt };
ExtReal ext_elem(ElemFn fn, const ExtReal& a);

namespace constants {
const ExtReal& pi();
const ExtReal& two_pi();
const ExtReal& half_pi();
const ExtReal& ln2();
const ExtReal& e();
}  // namespace constants

// Decimal conversion. Parsing accepts "[-]digits[.digits][e[+-]exp]" and
// "p/q" and is correctly rounded to double-double via exact rational
// arithmetic. Formatting prints `digits` significant digits in scientific
// notation when the exponent is outside [-5, 20], fixed otherwise.
ExtReal parse_ext_real(std::string_view text);
std::string to_string(const ExtReal& x, int digits = 32);
std::ostream& operator<<(std::ostream& os, const ExtReal& x);

}  // namespace rgw

template <>
class std::numeric_limits<rgw::ExtReal> {
 public:
  static constexpr bool is_specialized = true;
  static constexpr int digits = 106;
  static constexpr int digits10 = 31;
  static constexpr rgw::ExtReal epsilon() { return rgw::ExtReal(0x1p-104); }
  static constexpr rgw::ExtReal infinity() {
    return rgw::ExtReal(std::numeric_limits<double>::infinity());
  }
};
