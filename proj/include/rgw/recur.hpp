#pragma once

// Recurrence engines for the relative limit densities phi_n.

#include <cstddef>
#include <vector>

#include "rgw/density_seq.hpp"
#include "rgw/model.hpp"

namespace rgw {

struct RecurOptions {
  Mode mode = Mode::kRational;
  // Rational engines abort with ResourceError past this many bytes of
  // numerator/denominator storage.
  std::size_t max_rational_bytes = std::size_t{1} << 30;
};

// General engine:
//   phi_n int (p_1 - p_1^n) dmu = sum_{k<n} (k!/n!) phi_k int B_{n,k}(1! p_1, 2! p_2, ...) dmu
// with B_{n,k} the partial Bell polynomials, built column by column from
// B_{n,k} = sum_i binom(n-1, i-1) x_i B_{n-i,k-1}. With `printed_form` the
// factor k!/n! is dropped, which reproduces the misprinted variant (it
// gives phi_2 = 3 instead of 3/2 for the (1/2,1) family).
// Throws SolverError when the left factor vanishes.
DensitySeq densities_general(const EnvMeasure& mu, std::size_t N, const RecurOptions& opt = {},
                             bool printed_form = false);

// Partial Bell polynomial B_{n,k}(x_1, x_2, ...) for rational arguments.
Rational partial_bell(std::size_t n, std::size_t k, const std::vector<Rational>& x);

// c_{n,j} = sum_{m=2j}^{n} 2^{-(m-j)} binom(m-j, j), kept as a triangular
// table (row n holds j = 1..floor(n/2)) and grown one row at a time.
class CnjTable {
 public:
  explicit CnjTable(std::size_t n_max);
  std::size_t n_max() const { return rows_.size(); }
  const Rational& at(std::size_t n, std::size_t j) const { return rows_.at(n - 1).at(j - 1); }
  const std::vector<Rational>& row(std::size_t n) const { return rows_.at(n - 1); }

 private:
  std::vector<std::vector<Rational>> rows_;
};

enum class Example1Algo { kAuto, kCnjTable, kWindowed };

// (1/2,1) quadratic family:
//   (3/8 - (1 - 2^{-n-1})/(n+1)) phi_n = sum_k phi_{n-k} c_{n,k} / (2(n-k+1)).
// The table form costs O(N^2); kAuto switches to the windowed kernel for
// xfloat runs beyond a few thousand terms.
DensitySeq densities_example1(std::size_t N, const RecurOptions& opt = {}, Example1Algo algo = Example1Algo::kAuto);

// (0,1) quadratic family:
//   even n: phi_n = (n+1)/(n-1) phi_{n-1}
//   odd n:  phi_n = (n+1)/(n-1) phi_{n-1} - 4/(n-1) phi_{(n-1)/2}
DensitySeq densities_example2(std::size_t N, const RecurOptions& opt = {});

// Two equally weighted quadratic atoms a, b:
//   (a + b - a^n - b^n) phi_n = sum_{1 <= m <= n-m} (a^{n-2m}(1-a)^m + b^{n-2m}(1-b)^m) binom(n-m, m) phi_{n-m}.
// Exact in rational mode; xfloat uses the windowed kernel.
DensitySeq densities_two_poly(const Rational& a, const Rational& b, std::size_t N, const RecurOptions& opt = {});

// Linear-fractional family: phi_n = 1 for every mixing measure.
DensitySeq densities_linfrac(std::size_t N);

// Double-double engine for any measure made of quadratic atoms
// r z + (1-r) z^2 and/or one uniform quadratic block. Each step sums the
// binomial weights binom(i, n-i) c^{2i-n} (1-c)^{n-i} over a window of
// O(sqrt n) indices around their peak, updated incrementally; terms below
// 1e-38 of the peak are dropped.
DensitySeq densities_quadratic_windowed(const EnvMeasure& mu, std::size_t N);

// True when every component of mu is a quadratic family member.
bool is_quadratic_measure(const EnvMeasure& mu);

// Picks the engine: specialized when the measure is recognized, the
// windowed kernel for large xfloat quadratic runs, otherwise general.
DensitySeq densities_auto(const EnvMeasure& mu, std::size_t N, const RecurOptions& opt = {});

}  // namespace rgw
