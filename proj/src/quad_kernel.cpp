// Windowed double-double engine for quadratic families.
//
// For P_c(z) = c z + (1-c) z^2 the coefficient [z^m] P_c^i is
//   W(c; i, m) = binom(i, m-i) c^{2i-m} (1-c)^{m-i},   m/2 <= i <= m.
// Atoms enter through
//   phi_n (c - c^n) = sum_{i<n} phi_i W(c; i, n)
// and a uniform block on [lo, hi] through the antiderivative identity
//   int_lo^hi Phi(P_r(z)) dr = (F(P_hi(z)) - F(P_lo(z))) / (z - z^2),
// F = sum_i f_i z^i, f_i = phi_{i-1} / i, whose z^n coefficient is a prefix
// sum of boundary terms only. Both reduce to sums of W over i at fixed m,
// which are concentrated in a band of width O(sqrt m) around m / (2 - c).

#include <cmath>

#include "rgw/recur.hpp"

namespace rgw {

namespace {

constexpr double kCut = 1e-40;  // relative weight below which terms are dropped

// Tracks W(c; i_a, m_a) near the peak as m advances by one per call.
class BinomialWindow {
 public:
  explicit BinomialWindow(const ExtReal& c)
      : c_(c), omc_(1.0 - c), c2_over_omc_(c.sqr() / (1.0 - c)), omc_over_c_((1.0 - c) / c),
        peak_slope_(1.0 / (2.0 - c.to_double())) {}

  // sum_{i=lo..min(i_max, m)} f[i] W(c; i, m); m must increase by one per call
  // starting from m = 1.
  ExtReal sum(const std::vector<ExtReal>& f, std::size_t m, std::size_t i_max) {
    advance_to(m);
    const std::size_t i_lo = (m + 1) / 2;
    const std::size_t i_hi = std::min(i_max, m);
    if (i_lo > i_hi) return ExtReal(0.0);

    ExtReal total(0.0);
    // Walk right from the anchor.
    ExtReal w = w_;
    ExtReal peak = w_;
    std::size_t i = i_;
    if (i >= i_lo && i <= i_hi) total += f[i] * w;
    while (i < m) {
      const std::size_t k = m - i;  // >= 1
      // W(i+1)/W(i) = (i+1) k / ((i-k+2)(i-k+1)) * c^2/(1-c)
      w = w * c2_over_omc_ * (static_cast<double>(i + 1) * static_cast<double>(k)) /
          (static_cast<double>(i - k + 2) * static_cast<double>(i - k + 1));
      ++i;
      if (w > peak) peak = w;
      if (i > i_hi) break;
      if (i >= i_lo) total += f[i] * w;
      if (w.to_double() < kCut * peak.to_double()) break;
    }
    // Walk left from the anchor.
    w = w_;
    i = i_;
    while (i > i_lo) {
      const std::size_t j = i - 1;
      const std::size_t k = m - j;
      // W(j) = W(j+1) / ratio(j)
      w = w * (static_cast<double>(j - k + 2) * static_cast<double>(j - k + 1)) /
          (c2_over_omc_ * (static_cast<double>(j + 1) * static_cast<double>(k)));
      i = j;
      if (w > peak) peak = w;
      if (i <= i_hi) total += f[i] * w;
      if (w.to_double() < kCut * peak.to_double()) break;
    }
    return total;
  }

 private:
  void advance_to(std::size_t m) {
    if (m_ == 0) {
      m_ = 1;
      i_ = 1;
      w_ = c_;  // W(c; 1, 1) = c
    }
    while (m_ < m) {
      const std::size_t k = m_ - i_;
      const auto target = static_cast<std::size_t>(std::llround(static_cast<double>(m_ + 1) * peak_slope_));
      const bool can_keep = k + 1 <= i_;
      if (!can_keep || i_ + 1 <= target) {
        // (i, m) -> (i+1, m+1), k fixed: factor (i+1)/(i+1-k) * c.
        w_ = w_ * c_ * static_cast<double>(i_ + 1) / static_cast<double>(i_ + 1 - k);
        ++i_;
      } else {
        // (i, m) -> (i, m+1), k -> k+1: factor (i-k)/(k+1) * (1-c)/c.
        w_ = w_ * omc_over_c_ * static_cast<double>(i_ - k) / static_cast<double>(k + 1);
      }
      ++m_;
    }
  }

  ExtReal c_, omc_, c2_over_omc_, omc_over_c_;
  double peak_slope_;
  std::size_t m_ = 0, i_ = 0;
  ExtReal w_;
};

// sum_i f[i] W(c; i, m) for the degenerate c in {0, 1}.
ExtReal degenerate_sum(bool c_is_one, const std::vector<ExtReal>& f, std::size_t m, std::size_t i_max) {
  if (c_is_one) return m <= i_max ? f[m] : ExtReal(0.0);
  if (m % 2 == 0 && m / 2 <= i_max && m / 2 >= 1) return f[m / 2];
  return ExtReal(0.0);
}

struct Kernel {
  bool degenerate = false;
  bool one = false;
  BinomialWindow window{ExtReal(0.5)};

  explicit Kernel(const Rational& c) {
    if (c.is_zero() || c == Rational(1)) {
      degenerate = true;
      one = !c.is_zero();
    } else {
      window = BinomialWindow(c.to_ext());
    }
  }
  ExtReal sum(const std::vector<ExtReal>& f, std::size_t m, std::size_t i_max) {
    return degenerate ? degenerate_sum(one, f, m, i_max) : window.sum(f, m, i_max);
  }
};

}  // namespace

DensitySeq densities_quadratic_windowed(const EnvMeasure& mu, std::size_t N) {
  if (N == 0) throw ValidationError("N must be >= 1");
  if (!is_quadratic_measure(mu)) throw ValidationError("windowed kernel needs a quadratic family measure");
  require_admissible(mu);

  struct AtomK {
    ExtReal w, c;
    ExtReal cpow;  // c^n
    Kernel k;
  };
  struct BlockK {
    ExtReal rho, lo, hi, m1;
    ExtReal lo_pow, hi_pow;  // lo^{n+1}, hi^{n+1}
    Kernel klo, khi;
    ExtReal prefix;  // sum_{m=2}^{n} g_m
  };
  std::vector<AtomK> atoms;
  std::vector<BlockK> blocks;
  for (const auto& comp : mu.components()) {
    if (comp.kind == MeasureComponent::Kind::kPoint) {
      const Rational c = comp.coeffs.front().constant();
      atoms.push_back({comp.weight.to_ext(), c.to_ext(), c.to_ext(), Kernel(c)});
    } else {
      const ExtReal lo = comp.lo.to_ext(), hi = comp.hi.to_ext();
      const Rational m1 = (comp.hi * comp.hi - comp.lo * comp.lo) / Rational(2);
      blocks.push_back({comp.weight.to_ext(), lo, hi, m1.to_ext(), lo.sqr(), hi.sqr(), Kernel(comp.lo),
                        Kernel(comp.hi), ExtReal(0.0)});
    }
  }

  std::vector<ExtReal> phi(N + 2, ExtReal(0.0));
  std::vector<ExtReal> f(N + 2, ExtReal(0.0));  // f_i = phi_{i-1} / i
  phi[1] = 1.0;
  f[2] = 0.5;
  // g_2 = f_2 (hi^2 - lo^2) = m1.
  for (auto& b : blocks) b.prefix = b.m1;

  for (std::size_t n = 2; n <= N; ++n) {
    ExtReal lhs(0.0), rhs(0.0);
    for (auto& a : atoms) {
      a.cpow *= a.c;
      lhs += a.w * (a.c - a.cpow);
      rhs += a.w * a.k.sum(phi, n, n - 1);
    }
    std::vector<ExtReal> partial(blocks.size());
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
      auto& b = blocks[bi];
      b.lo_pow *= b.lo;
      b.hi_pow *= b.hi;
      const ExtReal span = (b.hi_pow - b.lo_pow) / static_cast<double>(n + 1);
      lhs += b.rho * (b.m1 - span);
      partial[bi] = b.khi.sum(f, n + 1, n) - b.klo.sum(f, n + 1, n);
      rhs += b.rho * (b.prefix + partial[bi]);
    }
    if (lhs.is_zero()) throw SolverError("vanishing left factor at n = " + std::to_string(n));
    phi[n] = rhs / lhs;
    f[n + 1] = phi[n] / static_cast<double>(n + 1);
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
      auto& b = blocks[bi];
      b.prefix += partial[bi] + f[n + 1] * (b.hi_pow - b.lo_pow);
    }
  }
  return DensitySeq::approx({phi.begin() + 1, phi.begin() + static_cast<long>(N) + 1}, "quadratic-windowed");
}

}  // namespace rgw
