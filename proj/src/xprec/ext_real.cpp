#include "rgw/ext_real.hpp"

#include <array>
#include <ostream>

#include "rgw/error.hpp"
#include "rgw/rational.hpp"

namespace rgw {

ExtReal floor(const ExtReal& x) {
  const double hi = std::floor(x.hi());
  if (hi != x.hi()) return ExtReal(hi);
  return ExtReal::from_parts(hi, std::floor(x.lo()));
}

ExtReal nint(const ExtReal& x) {
  if (signbit(x)) return -floor(-x + 0.5);
  return floor(x + 0.5);
}

ExtReal checked_div(const ExtReal& a, const ExtReal& b) {
  if (b.is_zero()) throw DivisionByZero();
  return a / b;
}

ExtReal ext_arith(ArithOp op, const ExtReal& a, const ExtReal& b) {
  switch (op) {
    case ArithOp::kAdd: return a + b;
    case ArithOp::kSub: return a - b;
    case ArithOp::kMul: return a * b;
    case ArithOp::kDiv: return checked_div(a, b);
  }
  throw DomainError("unknown arithmetic operation");
}

namespace constants {
const ExtReal& pi() {
  static const ExtReal v = parse_ext_real("3.14159265358979323846264338327950288419716939937510582");
  return v;
}
const ExtReal& two_pi() {
  static const ExtReal v = pi().ldexp(1);
  return v;
}
const ExtReal& half_pi() {
  static const ExtReal v = pi().ldexp(-1);
  return v;
}
const ExtReal& ln2() {
  static const ExtReal v = parse_ext_real("0.693147180559945309417232121458176568075500134360255254");
  return v;
}
const ExtReal& e() {
  static const ExtReal v = parse_ext_real("2.71828182845904523536028747135266249775724709369995957");
  return v;
}
}  // namespace constants

namespace {

constexpr int kInvFact = 30;

// 1/k! for k = 0..kInvFact-1.
const std::array<ExtReal, kInvFact>& inv_fact() {
  static const auto table = [] {
    std::array<ExtReal, kInvFact> t{};
    t[0] = 1.0;
    for (int k = 1; k < kInvFact; ++k) t[k] = t[k - 1] / static_cast<double>(k);
    return t;
  }();
  return table;
}

constexpr double kEps = 0x1p-106;

// e^r - 1 for |r| <= ~0.35: Taylor at r/512, then nine doublings.
ExtReal expm1_reduced(const ExtReal& r0) {
  const ExtReal r = r0.ldexp(-9);
  const auto& f = inv_fact();
  ExtReal s = r;
  ExtReal p = r;
  for (int k = 2; k < kInvFact; ++k) {
    p *= r;
    const ExtReal t = p * f[k];
    s += t;
    if (std::abs(t.hi()) <= kEps * std::abs(s.hi())) break;
  }
  for (int i = 0; i < 9; ++i) s = s.ldexp(1) + s.sqr();
  return s;
}

}  // namespace

ExtReal sqrt(const ExtReal& x) {
  if (x.is_zero()) return ExtReal(0.0);
  if (x.hi() < 0.0) throw DomainError("sqrt of a negative number");
  ExtReal r(std::sqrt(x.hi()));
  r += (x - r.sqr()) / r.ldexp(1);
  r += (x - r.sqr()) / r.ldexp(1);
  return r;
}

ExtReal exp(const ExtReal& x) {
  if (x.hi() > 709.7) return ExtReal(std::numeric_limits<double>::infinity());
  if (x.hi() < -745.0) return ExtReal(0.0);
  if (x.is_zero()) return ExtReal(1.0);
  const double k = std::nearbyint((x / constants::ln2()).hi());
  const ExtReal r = x - constants::ln2() * k;
  const ExtReal s = expm1_reduced(r) + 1.0;
  return s.ldexp(static_cast<int>(k));
}

ExtReal expm1(const ExtReal& x) {
  if (std::abs(x.hi()) > 0.3) return exp(x) - 1.0;
  return expm1_reduced(x);
}

ExtReal log(const ExtReal& x) {
  if (x.hi() <= 0.0) throw DomainError("log of a non-positive number");
  if (const ExtReal d = x - 1.0; std::abs(d.hi()) <= 1e-3) return log1p(d);
  ExtReal y(std::log(x.hi()));
  for (int i = 0; i < 2; ++i) y = y + x * exp(-y) - 1.0;
  return y;
}

ExtReal log1p(const ExtReal& x) {
  if (x.hi() <= -1.0) throw DomainError("log1p of a number <= -1");
  if (std::abs(x.hi()) > 1e-3) return log(x + 1.0);
  // Alternating series; |x| <= 1e-3 needs at most 12 terms.
  ExtReal s = x;
  ExtReal p = x;
  for (int k = 2; k < 40; ++k) {
    p *= -x;
    const ExtReal t = p / static_cast<double>(k);
    s += t;
    if (std::abs(t.hi()) <= kEps * std::abs(s.hi())) break;
  }
  return s;
}

ExtReal pow(const ExtReal& x, long n) {
  if (n < 0) return checked_div(ExtReal(1.0), pow(x, -n));
  ExtReal result(1.0);
  ExtReal base = x;
  auto m = static_cast<unsigned long>(n);
  while (m != 0) {
    if (m & 1UL) result *= base;
    m >>= 1;
    if (m != 0) base = base.sqr();
  }
  return result;
}

ExtReal pow(const ExtReal& x, const ExtReal& y) {
  if (y.is_zero()) return ExtReal(1.0);
  if (x.is_zero()) {
    if (y.hi() > 0.0) return ExtReal(0.0);
    throw DivisionByZero("zero raised to a negative power");
  }
  if (x.hi() < 0.0) throw DomainError("pow of a negative base");
  return exp(y * log(x));
}

void sincos(const ExtReal& x, ExtReal& s, ExtReal& c) {
  if (x.is_zero()) {
    s = 0.0;
    c = 1.0;
    return;
  }
  if (signbit(x)) {
    sincos(-x, s, c);
    s = -s;
    return;
  }
  const ExtReal j = nint(x / constants::half_pi());
  const ExtReal r = x - constants::half_pi() * j;
  const auto quadrant = static_cast<long>(std::fmod(j.hi(), 4.0) + std::fmod(j.lo(), 4.0));

  const auto& f = inv_fact();
  const ExtReal r2 = -r.sqr();
  ExtReal sr = r;
  ExtReal cr(1.0);
  ExtReal ps = r;
  ExtReal pc(1.0);
  for (int k = 1; 2 * k + 1 < kInvFact; ++k) {
    ps *= r2;
    pc *= r2;
    const ExtReal ts = ps * f[2 * k + 1];
    const ExtReal tc = pc * f[2 * k];
    sr += ts;
    cr += tc;
    if (std::abs(tc.hi()) <= kEps * 1e-3) break;
  }
  switch (((quadrant % 4) + 4) % 4) {
    case 0: s = sr; c = cr; break;
    case 1: s = cr; c = -sr; break;
    case 2: s = -sr; c = -cr; break;
    default: s = -cr; c = sr; break;
  }
}

ExtReal sin(const ExtReal& x) {
  ExtReal s, c;
  sincos(x, s, c);
  return s;
}

ExtReal cos(const ExtReal& x) {
  ExtReal s, c;
  sincos(x, s, c);
  return c;
}

ExtReal atan2(const ExtReal& y, const ExtReal& x) {
  if (x.is_zero()) {
    if (y.is_zero()) throw DomainError("atan2(0, 0)");
    return signbit(y) ? -constants::half_pi() : constants::half_pi();
  }
  if (y.is_zero()) return signbit(x) ? constants::pi() : ExtReal(0.0);
  const ExtReal r = sqrt(x.sqr() + y.sqr());
  const ExtReal xx = x / r;
  const ExtReal yy = y / r;
  ExtReal z(std::atan2(y.hi(), x.hi()));
  for (int i = 0; i < 2; ++i) {
    ExtReal sz, cz;
    sincos(z, sz, cz);
    if (std::abs(xx.hi()) > std::abs(yy.hi())) z += (yy - sz) / cz;
    else z -= (xx - cz) / sz;
  }
  return z;
}

ExtReal ext_elem(ElemFn fn, const ExtReal& a) {
  switch (fn) {
    case ElemFn::kLn: return log(a);
    case ElemFn::kExp: return exp(a);
    case ElemFn::kSqrt: return sqrt(a);
  }
  throw DomainError("unknown elementary function");
}

ExtReal parse_ext_real(std::string_view text) { return parse_rational(text).to_ext(); }

std::string to_string(const ExtReal& x, int digits) {
  if (std::isnan(x.hi())) return "nan";
  if (std::isinf(x.hi())) return x.hi() > 0 ? "inf" : "-inf";
  return to_decimal_string(Rational::from_ext(x), digits);
}

std::ostream& operator<<(std::ostream& os, const ExtReal& x) { return os << to_string(x); }

}  // namespace rgw
