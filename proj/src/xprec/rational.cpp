#include "rgw/rational.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>

#include "rgw/error.hpp"

namespace rgw {

Rational::Rational(long num, long den) {
  if (den == 0) throw DivisionByZero("rational with zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw DivisionByZero("rational with zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational Rational::from_double(double x) {
  if (!std::isfinite(x)) throw DomainError("non-finite double has no rational value");
  return Rational(mpq_class(x));
}

Rational Rational::from_ext(const ExtReal& x) {
  return from_double(x.hi()) + from_double(x.lo());
}

ExtReal Rational::to_ext() const {
  const double hi = q_.get_d();
  if (!std::isfinite(hi)) return ExtReal(hi);
  const mpq_class rem = q_ - mpq_class(hi);
  return ExtReal::from_parts(hi, rem.get_d());
}

std::size_t Rational::size_in_bits() const {
  return mpz_sizeinbase(q_.get_num_mpz_t(), 2) + mpz_sizeinbase(q_.get_den_mpz_t(), 2);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw DivisionByZero();
  return Rational(mpq_class(a.q_ / b.q_));
}

Rational rat_arith(RatOp op, const Rational& a, const Rational& b) {
  switch (op) {
    case RatOp::kAdd: return a + b;
    case RatOp::kSub: return a - b;
    case RatOp::kMul: return a * b;
    case RatOp::kDiv: return a / b;
  }
  throw DomainError("unknown rational operation");
}

Rational abs(const Rational& x) { return x.sign() < 0 ? -x : x; }

Rational pow(const Rational& x, long n) {
  if (n < 0) return Rational(1) / pow(x, -n);
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), x.mpq().get_num_mpz_t(), static_cast<unsigned long>(n));
  mpz_pow_ui(den.get_mpz_t(), x.mpq().get_den_mpz_t(), static_cast<unsigned long>(n));
  return Rational(num, den);
}

Rational binomial(unsigned long n, unsigned long k) {
  if (k > n) return Rational(0);
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return Rational(b, mpz_class(1));
}

Rational factorial(unsigned long n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return Rational(f, mpz_class(1));
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_number(std::string_view text) {
  throw ValidationError("malformed number: '" + std::string(text) + "'");
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
  bool neg = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    bad_number(whole);
  mpz_class z(std::string(s), 10);
  return neg ? mpz_class(-z) : z;
}

mpz_class pow10(unsigned long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, e);
  return p;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) bad_number(text);

  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const mpz_class num = parse_integer(trim(s.substr(0, slash)), text);
    const mpz_class den = parse_integer(trim(s.substr(slash + 1)), text);
    return Rational(num, den);
  }

  std::size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') {
    neg = s[i] == '-';
    ++i;
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  bool seen_digit = false;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) ++frac_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) bad_number(text);
  long exponent = 0;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') bad_number(text);
    const std::string_view exp_part = s.substr(i + 1);
    const mpz_class e = parse_integer(exp_part, text);
    if (!e.fits_slong_p() || abs(e) > 100000) bad_number(text);
    exponent = e.get_si();
  }
  const mpz_class mant(digits, 10);
  const long shift = exponent - frac_digits;
  mpq_class q = shift >= 0 ? mpq_class(mant * pow10(static_cast<unsigned long>(shift)))
                           : mpq_class(mant, pow10(static_cast<unsigned long>(-shift)));
  q.canonicalize();
  if (neg) q = -q;
  return Rational(q);
}

std::string to_fraction_string(const Rational& x) {
  if (x.is_integer()) return x.num().get_str();
  return x.num().get_str() + "/" + x.den().get_str();
}

std::string to_decimal_string(const Rational& x, int digits) {
  if (x.is_zero()) return "0";
  digits = std::max(digits, 1);
  const Rational a = abs(x);
  const mpz_class& num = a.mpq().get_num();
  const mpz_class& den = a.mpq().get_den();

  // Decimal exponent e with 10^e <= a < 10^(e+1); start from a size estimate.
  long e = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 10)) -
           static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 10));
  auto scaled_ge = [&](long ex) {  // a >= 10^ex
    return ex >= 0 ? num >= den * pow10(static_cast<unsigned long>(ex))
                   : num * pow10(static_cast<unsigned long>(-ex)) >= den;
  };
  while (!scaled_ge(e)) --e;
  while (scaled_ge(e + 1)) ++e;

  // s = round(a * 10^(digits-1-e)), half away from zero.
  auto round_scaled = [&](long ex) {
    const long shift = digits - 1 - ex;
    mpz_class n = num, d = den;
    if (shift >= 0) n *= pow10(static_cast<unsigned long>(shift));
    else d *= pow10(static_cast<unsigned long>(-shift));
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    if (2 * r >= d) q += 1;
    return q;
  };
  mpz_class s = round_scaled(e);
  if (s >= pow10(static_cast<unsigned long>(digits))) {
    ++e;
    s = round_scaled(e);
  }
  std::string ds = s.get_str();

  std::string out = x.sign() < 0 ? "-" : "";
  if (e >= -5 && e < 21) {
    if (e >= 0) {
      if (static_cast<long>(ds.size()) <= e + 1) {
        out += ds + std::string(static_cast<std::size_t>(e + 1) - ds.size(), '0');
        return out;
      }
      std::string frac = ds.substr(static_cast<std::size_t>(e + 1));
      while (!frac.empty() && frac.back() == '0') frac.pop_back();
      out += ds.substr(0, static_cast<std::size_t>(e + 1));
      if (!frac.empty()) out += "." + frac;
      return out;
    }
    std::string frac = std::string(static_cast<std::size_t>(-e - 1), '0') + ds;
    while (!frac.empty() && frac.back() == '0') frac.pop_back();
    return out + "0." + frac;
  }
  std::string frac = ds.substr(1);
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  out += ds.substr(0, 1);
  if (!frac.empty()) out += "." + frac;
  out += (e < 0 ? "e-" : "e+") + std::to_string(std::labs(e));
  return out;
}

std::ostream& operator<<(std::ostream& os, const Rational& x) {
  return os << to_fraction_string(x);
}

}  // namespace rgw
