#pragma once

// Truncated power series and the averaged Schroder operator
//   H(S)(z) = int S(P_r(z)) mu(dr) / int p_1r mu(dr).

#include <cstddef>
#include <vector>

#include "rgw/density_seq.hpp"
#include "rgw/model.hpp"

namespace rgw {

// c_1..c_N with c_0 = 0 implied. T is Rational or ExtReal.
template <class T>
class TruncSeries {
 public:
  explicit TruncSeries(std::size_t order) : c_(order + 1, T(0)) {}
  static TruncSeries identity(std::size_t order) {
    TruncSeries s(order);
    if (order >= 1) s.c_[1] = T(1);
    return s;
  }

  std::size_t order() const { return c_.size() - 1; }
  // Coefficient of z^n (n <= order).
  const T& operator[](std::size_t n) const { return c_.at(n); }
  void set(std::size_t n, T v) {
    if (n == 0) throw DomainError("truncated series have no constant term");
    c_.at(n) = std::move(v);
  }
  std::vector<T> tail() const { return {c_.begin() + 1, c_.end()}; }

  friend bool operator==(const TruncSeries& a, const TruncSeries& b) { return a.c_ == b.c_; }

 private:
  std::vector<T> c_;
};

// S(P(z)) truncated at S.order().
TruncSeries<Rational> compose_poly(const GenFunc& P, const TruncSeries<Rational>& S);
TruncSeries<ExtReal> compose_poly(const GenFunc& P, const TruncSeries<ExtReal>& S);

// Exact lower-triangular matrix A[n][k] = int [z^n] P_r(z)^k mu(dr) for
// 1 <= k <= n <= N, built by truncated polynomial powers with coefficients
// that are polynomials in r. The operator H acts as (H S)_n = sum_k
// A[n][k] s_k / int p_1.
class TransferMatrix {
 public:
  TransferMatrix(const EnvMeasure& mu, std::size_t order);

  std::size_t order() const { return order_; }
  const Rational& raw(std::size_t n, std::size_t k) const { return a_[n - 1][k - 1]; }
  const Rational& int_p1() const { return int_p1_; }
  const Rational& mass() const { return mass_; }

  // Applies H. Coefficient 1 of the result is s_1.
  TruncSeries<Rational> apply(const TruncSeries<Rational>& s) const;
  TruncSeries<ExtReal> apply(const TruncSeries<ExtReal>& s) const;

  // The unique fixed point with phi_1 = 1, by exact forward substitution.
  std::vector<Rational> exact_fixed_point() const;

 private:
  std::size_t order_;
  Rational int_p1_;
  Rational mass_;
  std::vector<std::vector<Rational>> a_;  // row n-1 holds k = 1..n
  std::vector<std::vector<ExtReal>> af_;  // a_ / int_p1 in double-double
};

TruncSeries<Rational> schroder_apply(const EnvMeasure& mu, const TruncSeries<Rational>& s);
TruncSeries<ExtReal> schroder_apply(const EnvMeasure& mu, const TruncSeries<ExtReal>& s);

struct FixpointResult {
  DensitySeq seq;
  std::size_t iterations = 0;  // Banach steps taken
  ExtReal last_change;         // max relative coefficient change of the last step
  ExtReal defect;              // max |H(Phi) - Phi| (exactly 0 in rational mode)
};

// Carries the last iterate when the iteration budget runs out.
class FixpointNotConverged : public SolverError {
 public:
  FixpointNotConverged(const std::string& what, std::vector<ExtReal> last, ExtReal change)
      : SolverError(what), last_iterate(std::move(last)), last_change(change) {}
  std::vector<ExtReal> last_iterate;
  ExtReal last_change;
};

// Banach iteration Phi_{t+1} = H(Phi_t) from Phi_0 = z in double-double
// until the relative change is <= tol. In rational mode the limit is then
// obtained exactly (forward substitution on the truncated operator), checked
// against the iterate and certified by an exact zero defect.
FixpointResult schroder_fixpoint(const EnvMeasure& mu, std::size_t order, double tol = 1e-30,
                                 std::size_t max_iter = 100000, Mode mode = Mode::kRational);

// Exact Banach iterates H^t(z), t = 0..steps, for studying convergence.
std::vector<TruncSeries<Rational>> schroder_iterates(const EnvMeasure& mu, std::size_t order,
                                                     std::size_t steps);

}  // namespace rgw
