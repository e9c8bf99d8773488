#include "rgw/ext_complex.hpp"

#include <ostream>

#include "rgw/error.hpp"

namespace rgw {

ExtComplex operator/(const ExtComplex& a, const ExtComplex& b) {
  const ExtReal d = b.norm();
  if (d.is_zero()) throw DivisionByZero("complex division by zero");
  return {(a.re_ * b.re_ + a.im_ * b.im_) / d, (a.im_ * b.re_ - a.re_ * b.im_) / d};
}

ExtReal abs(const ExtComplex& z) { return sqrt(z.norm()); }

ExtReal arg(const ExtComplex& z) { return atan2(z.im(), z.re()); }

ExtComplex exp(const ExtComplex& z) {
  const ExtReal m = exp(z.re());
  if (z.im().is_zero()) return ExtComplex(m);
  ExtReal s, c;
  sincos(z.im(), s, c);
  return {m * c, m * s};
}

ExtComplex log(const ExtComplex& z) {
  if (z.im().is_zero()) {
    if (z.re().is_zero()) throw DomainError("log of zero");
    if (!signbit(z.re())) return ExtComplex(log(z.re()));
    return {log(-z.re()), constants::pi()};
  }
  return {log(z.norm()).ldexp(-1), arg(z)};
}

ExtComplex cpow(const ExtReal& base, const ExtComplex& exponent) {
  if (base.hi() <= 0.0) throw DomainError("cpow needs a positive base");
  if (exponent.im().is_zero()) {
    const ExtReal& a = exponent.re();
    if (floor(a) == a && std::abs(a.hi()) < 0x1p31) return ExtComplex(pow(base, static_cast<long>(a.hi())));
    return ExtComplex(exp(a * log(base)));
  }
  const ExtReal l = log(base);
  return exp(exponent * l);
}

std::string to_string(const ExtComplex& z, int digits) {
  std::string out = to_string(z.re(), digits);
  if (signbit(z.im())) out += " - " + to_string(-z.im(), digits) + "i";
  else out += " + " + to_string(z.im(), digits) + "i";
  return out;
}

std::ostream& operator<<(std::ostream& os, const ExtComplex& z) { return os << to_string(z); }

}  // namespace rgw
