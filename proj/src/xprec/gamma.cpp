// Complex Gamma via the Stirling series after an upward shift.

#include <gmpxx.h>

#include <vector>

#include "rgw/error.hpp"
#include "rgw/ext_complex.hpp"
#include "rgw/rational.hpp"

namespace rgw {

namespace {

constexpr int kTerms = 15;       // B_2 .. B_30
constexpr double kShiftTo = 25;  // Re(z) after shifting

// Bernoulli numbers B_0..B_n, exact.
std::vector<Rational> bernoulli(int n) {
  std::vector<Rational> b(static_cast<std::size_t>(n + 1));
  b[0] = Rational(1);
  for (int m = 1; m <= n; ++m) {
    Rational s(0);
    for (int k = 0; k < m; ++k)
      s += binomial(static_cast<unsigned long>(m + 1), static_cast<unsigned long>(k)) * b[static_cast<std::size_t>(k)];
    b[static_cast<std::size_t>(m)] = -s / Rational(m + 1);
  }
  return b;
}

// B_{2k} / (2k (2k-1)), k = 1..kTerms.
const std::vector<ExtReal>& stirling_coeffs() {
  static const std::vector<ExtReal> c = [] {
    const auto b = bernoulli(2 * kTerms);
    std::vector<ExtReal> out;
    for (int k = 1; k <= kTerms; ++k)
      out.push_back((b[static_cast<std::size_t>(2 * k)] / Rational(2 * k * (2 * k - 1))).to_ext());
    return out;
  }();
  return c;
}

// ln Gamma(w) for Re(w) >= kShiftTo.
ExtComplex lgamma_stirling(const ExtComplex& w) {
  static const ExtReal half_ln_2pi = log(constants::two_pi()).ldexp(-1);
  const ExtComplex lw = log(w);
  ExtComplex s = (w - ExtComplex(0.5)) * lw - w + ExtComplex(half_ln_2pi);
  const ExtComplex inv = ExtComplex(1.0) / w;
  const ExtComplex inv2 = inv * inv;
  ExtComplex p = inv;
  for (const ExtReal& c : stirling_coeffs()) {
    s += p * c;
    p *= inv2;
  }
  return s;
}

bool is_pole(const ExtComplex& z) {
  return z.im().is_zero() && z.re().hi() <= 0.0 && floor(z.re()) == z.re();
}

int shift_count(const ExtComplex& z) {
  const double re = z.re().to_double();
  return re >= kShiftTo ? 0 : static_cast<int>(std::ceil(kShiftTo - re));
}

}  // namespace

ExtComplex gamma(const ExtComplex& z) {
  if (is_pole(z)) throw DomainError("Gamma has a pole at " + to_string(z.re(), 17));
  const int m = shift_count(z);
  ExtComplex prod(1.0);
  for (int k = 0; k < m; ++k) prod *= z + ExtComplex(static_cast<double>(k));
  return exp(lgamma_stirling(z + ExtComplex(static_cast<double>(m)))) / prod;
}

ExtComplex rgamma(const ExtComplex& z) {
  if (is_pole(z)) return ExtComplex(0.0);
  const int m = shift_count(z);
  ExtComplex prod(1.0);
  for (int k = 0; k < m; ++k) prod *= z + ExtComplex(static_cast<double>(k));
  return prod * exp(-lgamma_stirling(z + ExtComplex(static_cast<double>(m))));
}

// A logarithm of Gamma(z); the imaginary part is not reduced to the
// principal branch.
ExtComplex lgamma(const ExtComplex& z) {
  if (is_pole(z)) throw DomainError("Gamma has a pole at " + to_string(z.re(), 17));
  const int m = shift_count(z);
  ExtComplex s = lgamma_stirling(z + ExtComplex(static_cast<double>(m)));
  for (int k = 0; k < m; ++k) s -= log(z + ExtComplex(static_cast<double>(k)));
  return s;
}

}  // namespace rgw
