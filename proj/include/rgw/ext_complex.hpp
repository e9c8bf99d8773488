#pragma once

#include <complex>
#include <iosfwd>
#include <string>

#include "rgw/ext_real.hpp"

namespace rgw {

class ExtComplex {
 public:
  ExtComplex() = default;
  ExtComplex(const ExtReal& re) : re_(re) {}  // NOLINT(google-explicit-constructor)
  ExtComplex(double re) : re_(re) {}          // NOLINT(google-explicit-constructor)
  ExtComplex(const ExtReal& re, const ExtReal& im) : re_(re), im_(im) {}

  const ExtReal& re() const { return re_; }
  const ExtReal& im() const { return im_; }
  std::complex<double> to_complex() const { return {re_.to_double(), im_.to_double()}; }

  ExtComplex conj() const { return {re_, -im_}; }
  ExtReal norm() const { return re_.sqr() + im_.sqr(); }

  ExtComplex operator-() const { return {-re_, -im_}; }

  friend ExtComplex operator+(const ExtComplex& a, const ExtComplex& b) {
    return {a.re_ + b.re_, a.im_ + b.im_};
  }
  friend ExtComplex operator-(const ExtComplex& a, const ExtComplex& b) {
    return {a.re_ - b.re_, a.im_ - b.im_};
  }
  friend ExtComplex operator*(const ExtComplex& a, const ExtComplex& b) {
    return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
  }
  friend ExtComplex operator*(const ExtComplex& a, const ExtReal& s) {
    return {a.re_ * s, a.im_ * s};
  }
  friend ExtComplex operator*(const ExtReal& s, const ExtComplex& a) { return a * s; }
  friend ExtComplex operator*(const ExtComplex& a, double s) { return {a.re_ * s, a.im_ * s}; }
  friend ExtComplex operator*(double s, const ExtComplex& a) { return a * s; }
  friend ExtComplex operator/(const ExtComplex& a, const ExtReal& s) {
    return {a.re_ / s, a.im_ / s};
  }
  friend ExtComplex operator/(const ExtComplex& a, double s) { return {a.re_ / s, a.im_ / s}; }
  friend ExtComplex operator/(const ExtComplex& a, const ExtComplex& b);

  ExtComplex& operator+=(const ExtComplex& b) { return *this = *this + b; }
  ExtComplex& operator-=(const ExtComplex& b) { return *this = *this - b; }
  ExtComplex& operator*=(const ExtComplex& b) { return *this = *this * b; }
  ExtComplex& operator/=(const ExtComplex& b) { return *this = *this / b; }

  friend bool operator==(const ExtComplex& a, const ExtComplex& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

 private:
  ExtReal re_;
  ExtReal im_;
};

inline ExtComplex conj(const ExtComplex& z) { return z.conj(); }
ExtReal abs(const ExtComplex& z);
ExtReal arg(const ExtComplex& z);

ExtComplex exp(const ExtComplex& z);
// Principal branch.
ExtComplex log(const ExtComplex& z);

// base^exponent on the principal branch, base > 0. Integer real exponents
// are evaluated by repeated squaring so that e.g. 2^-1 is exact.
ExtComplex cpow(const ExtReal& base, const ExtComplex& exponent);

// Gamma and a logarithm of Gamma (not branch-reduced), relative error < 1e-25 away
// from the poles. Throws DomainError at non-positive integers.
ExtComplex gamma(const ExtComplex& z);
ExtComplex lgamma(const ExtComplex& z);
ExtComplex rgamma(const ExtComplex& z);  // 1/Gamma(z), entire: zero at poles

std::string to_string(const ExtComplex& z, int digits = 32);
std::ostream& operator<<(std::ostream& os, const ExtComplex& z);

}  // namespace rgw
