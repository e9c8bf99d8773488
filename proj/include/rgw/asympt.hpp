#pragma once

// Asymptotic models for phi_n and fitting of their constants.

#include <cstddef>
#include <string>
#include <vector>

#include "rgw/charroots.hpp"
#include "rgw/density_seq.hpp"
#include "rgw/ext_complex.hpp"

namespace rgw {

// (-1)^n [n^{-a-1} / Gamma(-a) + a(a+1)/2 n^{-a-2} / Gamma(-a)], the large-n
// form of binom(a, n); terms = 1 keeps only the first part.
// Throws DomainError when a is a non-negative integer.
ExtComplex binom_asympt(const ExtComplex& alpha, std::size_t n, int terms = 2);

// binom(a, n) by the product formula.
ExtComplex binom_exact(const ExtComplex& alpha, std::size_t n);

struct PowerTerm {
  ExtComplex alpha;
  int j = 0;
  ExtComplex c;
  bool paired = false;  // adds the conjugate term as well
};

// table[n mod period] / n^power
struct PeriodicTerm {
  std::size_t period = 1;
  int power = 0;
  std::vector<ExtReal> table;
};

class AsymptoticModel {
 public:
  // C n^{-alpha-j}; complex alpha is paired with its conjugate automatically.
  AsymptoticModel& add_power(const ExtComplex& alpha, int j, const ExtComplex& c);
  AsymptoticModel& add_periodic(std::size_t period, int power, std::vector<ExtReal> table);

  // Sorted by Re(alpha) + j ascending.
  const std::vector<PowerTerm>& power_terms() const { return power_; }
  const std::vector<PeriodicTerm>& periodic_terms() const { return periodic_; }

  ExtReal eval(std::size_t n) const;
  std::string describe() const;

 private:
  std::vector<PowerTerm> power_;
  std::vector<PeriodicTerm> periodic_;
};

struct FitResult {
  ExtReal estimate;
  ExtReal error;   // |R(hi) - R(hi/2)|
  ExtReal previous_error;  // |R(hi/2) - R(hi/4)|
  bool converged = true;   // false when halving the window made things worse
  std::size_t n_used = 0;
};

// phi_n ~ C n^power. g_n = phi_n n^{-power} is averaged as
// (g_{n-1} + 2 g_n + g_{n+1}) / 4 to cancel (-1)^n terms, then extrapolated
// in 1/n from n, n/2, n/4 (second order). The estimate uses the largest
// n <= window_hi - 1 divisible by 32; the gauge compares with the same
// extrapolation at n/2. Needs n/8 >= window_lo.
FitResult fit_leading_constant(const DensitySeq& seq, const ExtReal& power, std::size_t window_lo,
                               std::size_t window_hi);
FitResult fit_leading_constant(const DensitySeq& seq, const ExtReal& power);  // window [N/10, N]

// Least-squares constants for paired terms C_k n^{-alpha_k-j} on the residual
// phi_n - base(n), sampled at `samples` log-spaced n in the window.
struct OscillationFit {
  std::vector<ExtComplex> constants;
  ExtReal rms;  // of the remaining residual
};
OscillationFit fit_oscillation_constants(const DensitySeq& seq, const AsymptoticModel& base,
                                         const std::vector<ExtComplex>& alphas, int j, std::size_t window_lo,
                                         std::size_t window_hi, std::size_t samples = 400);

// Least-squares recovery of a periodic table from the scaled residual
//   (phi_n - base(n)) n^power / scale
//     = table[n mod period] + sum_{q=1..class_orders} b_{k,q} n^{-q}
//       + sum_i 2 Re(C_i n^{power - alpha_i - j}) / scale
// using every n in the window. The b and C terms absorb the next periodic
// order and log-periodic terms from complex zeros.
struct PeriodicExtraction {
  std::vector<ExtReal> table;
  std::vector<ExtComplex> oscillation;  // C_i
  ExtReal rms;
};
PeriodicExtraction extract_periodic_table(const DensitySeq& seq, const AsymptoticModel& base, std::size_t period,
                                          int power, const ExtReal& scale, std::size_t window_lo,
                                          std::size_t window_hi, int class_orders,
                                          const std::vector<ExtComplex>& alphas, int j);

// Primary F-exponent of the (1/2,1) family.
ExtReal example1_alpha();
// -a(3a^2 + 11a + 2) / (2(6 + 9a))
ExtReal example1_second_coefficient(const ExtReal& alpha);
// C (n^{-a} + k n^{-a-1}) with a = example1_alpha().
AsymptoticModel model_example1(const ExtReal& c);

// A = 1/(2 - 2 ln 2); the eight period-8 constants rho_0..rho_7.
ExtReal example2_a();
std::vector<ExtReal> example2_rho();
// level 1: A(n+1) - B + C(-1)^n, B = A/(4 ln2 - 2), C = A/2
// level 2: adds A[-(-1)^n (1-ln2)/((2ln2-1) n) + (cos(pi n/2) - sin(pi n/2))/n]
// level 3: adds A rho_{n mod 8} / n^2
AsymptoticModel model_example2(int level);

// [(2-a)^{al-1}(a-a^2) + (2-b)^{al-1}(b-b^2)] / [(2-a)^al (a-1) + (2-b)^al (b-1)]
ExtReal two_poly_ratio(const Rational& a, const Rational& b, const ExtReal& alpha);
// C (n^{-al-1} + ratio al(al+1)/2 n^{-al-2}); alpha must be the primary real root.
AsymptoticModel model_two_poly(const Rational& a, const Rational& b, const CharRoot& alpha, const ExtReal& c);

}  // namespace rgw
