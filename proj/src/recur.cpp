#include "rgw/recur.hpp"

#include <algorithm>

namespace rgw {

namespace {

class RationalBudget {
 public:
  explicit RationalBudget(std::size_t max_bytes) : max_bits_(max_bytes * 8) {}
  void add(const Rational& x, std::size_t n) {
    bits_ += x.size_in_bits();
    if (bits_ > max_bits_)
      throw ResourceError("rational storage exceeded " + std::to_string(max_bits_ / 8) + " bytes at n = " +
                          std::to_string(n) + "; use xfloat mode");
  }

 private:
  std::size_t max_bits_;
  std::size_t bits_ = 0;
};

[[noreturn]] void vanishing(std::size_t n) {
  throw SolverError("vanishing denominator int (p1 - p1^n) dmu at n = " + std::to_string(n));
}

// Exact general engine.
DensitySeq general_rational(const EnvMeasure& mu, std::size_t N, const RecurOptions& opt, bool printed) {
  const std::size_t d = mu.max_degree();
  const Rational int_p1 = integrate_p1(mu);
  RationalBudget budget(opt.max_rational_bytes);

  struct Comp {
    const MeasureComponent* c;
    std::vector<RPoly> x;    // x_i = i! p_i, index i (0 unused)
    std::vector<RPoly> col;  // B_{n,k} for the current k, index n
  };
  std::vector<Comp> comps;
  for (const auto& c : mu.components()) {
    Comp cc{&c, std::vector<RPoly>(d + 1), std::vector<RPoly>(N + 1)};
    for (std::size_t i = 1; i <= c.coeffs.size(); ++i) cc.x[i] = c.coeffs[i - 1] * factorial(i);
    for (std::size_t n = 1; n <= std::min(N, c.coeffs.size()); ++n) cc.col[n] = cc.x[n];  // k = 1
    comps.push_back(std::move(cc));
  }

  std::vector<Rational> rhs(N + 1, Rational(0));
  std::vector<Rational> phi(N + 1, Rational(0));
  phi[1] = Rational(1);
  for (std::size_t k = 1; k <= N; ++k) {
    if (k >= 2) {
      const Rational denom = int_p1 - integrate_p1_pow(mu, k);
      if (denom.is_zero()) vanishing(k);
      phi[k] = rhs[k] / denom;
      budget.add(phi[k], k);
    }
    if (k == N) break;
    const Rational kfact = factorial(k);
    for (auto& cc : comps) {
      // Contributions of column k to rows n > k.
      for (std::size_t n = k + 1; n <= std::min(N, k * d); ++n) {
        if (cc.col[n].is_zero()) continue;
        Rational v = cc.c->integrate(cc.col[n]);
        if (!printed) v = v * kfact / factorial(n);
        rhs[n] += phi[k] * v;
      }
      // Column k+1: B_{n,k+1} = sum_i binom(n-1, i-1) x_i B_{n-i,k}.
      std::vector<RPoly> next(N + 1);
      for (std::size_t n = k + 1; n <= std::min(N, (k + 1) * d); ++n) {
        RPoly acc;
        for (std::size_t i = 1; i <= d && i + k <= n; ++i) {
          if (cc.x[i].is_zero() || cc.col[n - i].is_zero()) continue;
          acc += cc.col[n - i] * (cc.x[i] * binomial(n - 1, i - 1));
        }
        next[n] = std::move(acc);
      }
      cc.col = std::move(next);
    }
  }
  phi.erase(phi.begin());
  return DensitySeq::exact(std::move(phi), printed ? "general-printed" : "general");
}

// Double-double general engine on b_{n,k} = (k!/n!) B_{n,k}, which obeys
// b_{n,k} = (k/n) sum_i i p_i b_{n-i,k-1}. Uniform components become
// Gauss-Legendre point sets, exact for polynomial integrands of degree
// below 128 per panel.
DensitySeq general_xfloat(const EnvMeasure& mu, std::size_t N) {
  struct Point {
    ExtReal w;
    std::vector<ExtReal> p;  // p_1..p_d
  };
  std::vector<Point> pts;
  const GaussRule& g = gauss_legendre_64();
  for (const auto& c : mu.components()) {
    if (c.kind == MeasureComponent::Kind::kPoint) {
      Point pt{c.weight.to_ext(), {}};
      for (const auto& q : c.coeffs) pt.p.push_back(q.constant().to_ext());
      pts.push_back(std::move(pt));
      continue;
    }
    const std::size_t panels = std::max<std::size_t>(1, (N + 127) / 128);
    const ExtReal lo = c.lo.to_ext(), hi = c.hi.to_ext();
    const ExtReal h = (hi - lo) / static_cast<double>(panels);
    const ExtReal half = h.ldexp(-1);
    for (std::size_t pn = 0; pn < panels; ++pn) {
      const ExtReal mid = lo + h * static_cast<double>(pn) + half;
      for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const ExtReal r = mid + half * g.nodes[i];
        Point pt{c.weight.to_ext() * g.weights[i] * half, {}};
        for (const auto& q : c.coeffs) pt.p.push_back(q.eval(r));
        pts.push_back(std::move(pt));
      }
    }
  }

  std::vector<ExtReal> denom(N + 1, ExtReal(0.0));
  {
    const Rational ip1 = integrate_p1(mu);
    for (std::size_t n = 2; n <= N; ++n) {
      const Rational dn = ip1 - integrate_p1_pow(mu, n);
      if (dn.is_zero()) vanishing(n);
      denom[n] = dn.to_ext();
    }
  }

  std::vector<ExtReal> rhs(N + 1, ExtReal(0.0));
  std::vector<ExtReal> phi(N + 1, ExtReal(0.0));
  phi[1] = 1.0;
  std::vector<std::vector<ExtReal>> cols(pts.size(), std::vector<ExtReal>(N + 1, ExtReal(0.0)));
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t n = 1; n <= std::min(N, pts[a].p.size()); ++n) cols[a][n] = pts[a].p[n - 1];

  for (std::size_t k = 1; k <= N; ++k) {
    if (k >= 2) phi[k] = rhs[k] / denom[k];
    if (k == N) break;
    for (std::size_t a = 0; a < pts.size(); ++a) {
      const auto& pt = pts[a];
      const std::size_t d = pt.p.size();
      auto& col = cols[a];
      const ExtReal wphi = pt.w * phi[k];
      for (std::size_t n = k + 1; n <= std::min(N, k * d); ++n) rhs[n] += wphi * col[n];
      std::vector<ExtReal> next(N + 1, ExtReal(0.0));
      for (std::size_t n = k + 1; n <= std::min(N, (k + 1) * d); ++n) {
        ExtReal acc(0.0);
        for (std::size_t i = 1; i <= d && i + k <= n; ++i) acc += col[n - i] * pt.p[i - 1] * static_cast<double>(i);
        next[n] = acc * static_cast<double>(k + 1) / static_cast<double>(n);
      }
      col = std::move(next);
    }
  }
  phi.erase(phi.begin());
  return DensitySeq::approx(std::move(phi), "general");
}

template <class T>
T from_rational(const Rational& r) {
  if constexpr (std::is_same_v<T, Rational>) return r;
  else return r.to_ext();
}

template <class T>
std::vector<T> example1_table(std::size_t N, RationalBudget* budget) {
  std::vector<T> phi(N + 1, T(0));
  phi[1] = T(1);
  std::vector<T> c(N / 2 + 2, T(0));  // c_{n,j}
  std::vector<T> t(N / 2 + 2, T(0));  // 2^{-(n-j)} binom(n-j, j)
  T pow2 = T(1);                      // 2^{-(n+1)}
  T half_pow = T(1);                  // 2^{-n/2} for even n
  pow2 = from_rational<T>(Rational(1, 4));
  for (std::size_t n = 2; n <= N; ++n) {
    for (std::size_t j = 1; 2 * j < n; ++j)
      t[j] = t[j] * from_rational<T>(Rational(static_cast<long>(n - j), static_cast<long>(2 * (n - 2 * j))));
    if (n % 2 == 0) {
      half_pow = half_pow * from_rational<T>(Rational(1, 2));
      t[n / 2] = half_pow;
    }
    for (std::size_t j = 1; 2 * j <= n; ++j) c[j] += t[j];

    pow2 = pow2 * from_rational<T>(Rational(1, 2));
    const T lhs = from_rational<T>(Rational(3, 8)) -
                  (T(1) - pow2) / from_rational<T>(Rational(static_cast<long>(n + 1)));
    T acc(0);
    for (std::size_t k = 1; 2 * k <= n; ++k)
      acc += phi[n - k] * c[k] / from_rational<T>(Rational(static_cast<long>(2 * (n - k + 1))));
    phi[n] = acc / lhs;
    if constexpr (std::is_same_v<T, Rational>) budget->add(phi[n], n);
  }
  phi.erase(phi.begin());
  return phi;
}

template <class T>
std::vector<T> example2_run(std::size_t N) {
  std::vector<T> phi(N + 1, T(0));
  phi[1] = T(1);
  for (std::size_t n = 2; n <= N; ++n) {
    const T f = from_rational<T>(Rational(static_cast<long>(n + 1), static_cast<long>(n - 1)));
    phi[n] = f * phi[n - 1];
    if (n % 2 == 1) phi[n] -= from_rational<T>(Rational(4, static_cast<long>(n - 1))) * phi[(n - 1) / 2];
  }
  phi.erase(phi.begin());
  return phi;
}

}  // namespace

Rational partial_bell(std::size_t n, std::size_t k, const std::vector<Rational>& x) {
  // x[i-1] holds x_i. Table over (n, k) by the standard recurrence.
  if (n == 0 && k == 0) return Rational(1);
  if (n == 0 || k == 0 || k > n) return Rational(0);
  std::vector<std::vector<Rational>> B(n + 1, std::vector<Rational>(k + 1, Rational(0)));
  B[0][0] = Rational(1);
  for (std::size_t m = 1; m <= n; ++m)
    for (std::size_t kk = 1; kk <= std::min(m, k); ++kk)
      for (std::size_t i = 1; i + kk - 1 <= m; ++i) {
        const Rational xi = i <= x.size() ? x[i - 1] : Rational(0);
        if (xi.is_zero() || B[m - i][kk - 1].is_zero()) continue;
        B[m][kk] += binomial(m - 1, i - 1) * xi * B[m - i][kk - 1];
      }
  return B[n][k];
}

DensitySeq densities_general(const EnvMeasure& mu, std::size_t N, const RecurOptions& opt, bool printed_form) {
  if (N == 0) throw ValidationError("N must be >= 1");
  require_admissible(mu);
  if (opt.mode == Mode::kRational) return general_rational(mu, N, opt, printed_form);
  if (printed_form) throw ValidationError("the printed-form variant is available in rational mode only");
  return general_xfloat(mu, N);
}

CnjTable::CnjTable(std::size_t n_max) {
  std::vector<Rational> t;  // t[j-1] = 2^{-(n-j)} binom(n-j, j)
  std::vector<Rational> c;
  for (std::size_t n = 1; n <= n_max; ++n) {
    for (std::size_t j = 1; 2 * j < n; ++j)
      t[j - 1] *= Rational(static_cast<long>(n - j), static_cast<long>(2 * (n - 2 * j)));
    if (n % 2 == 0) {
      t.push_back(pow(Rational(1, 2), static_cast<long>(n / 2)));
      c.emplace_back(0);
    }
    for (std::size_t j = 0; j < c.size(); ++j) c[j] += t[j];
    rows_.push_back(c);
  }
}

DensitySeq densities_example1(std::size_t N, const RecurOptions& opt, Example1Algo algo) {
  if (N == 0) throw ValidationError("N must be >= 1");
  if (algo == Example1Algo::kAuto)
    algo = (opt.mode == Mode::kXFloat && N > 2000) ? Example1Algo::kWindowed : Example1Algo::kCnjTable;
  if (algo == Example1Algo::kWindowed) {
    if (opt.mode == Mode::kRational) throw ValidationError("the windowed kernel is double-double only");
    DensitySeq s = densities_quadratic_windowed(example_measure("1"), N);
    return DensitySeq::approx(s.values(), "example1-windowed");
  }
  if (opt.mode == Mode::kRational) {
    RationalBudget budget(opt.max_rational_bytes);
    return DensitySeq::exact(example1_table<Rational>(N, &budget), "example1");
  }
  if (N > 2000) throw ValidationError("c_{n,j} table in double-double underflows beyond N = 2000; use the windowed kernel");
  return DensitySeq::approx(example1_table<ExtReal>(N, nullptr), "example1");
}

DensitySeq densities_example2(std::size_t N, const RecurOptions& opt) {
  if (N == 0) throw ValidationError("N must be >= 1");
  if (opt.mode == Mode::kRational) {
    auto phi = example2_run<Rational>(N);
    RationalBudget budget(opt.max_rational_bytes);
    for (std::size_t n = 1; n <= N; ++n) budget.add(phi[n - 1], n);
    return DensitySeq::exact(std::move(phi), "example2");
  }
  return DensitySeq::approx(example2_run<ExtReal>(N), "example2");
}

DensitySeq densities_two_poly(const Rational& a, const Rational& b, std::size_t N, const RecurOptions& opt) {
  if (N == 0) throw ValidationError("N must be >= 1");
  if (a.sign() <= 0 || a >= Rational(1) || b.sign() <= 0 || b >= Rational(1))
    throw ValidationError("two-polynomial parameters must lie in (0, 1)");
  if (opt.mode == Mode::kXFloat) {
    DensitySeq s = densities_quadratic_windowed(EnvMeasure::two_poly(a, b), N);
    return DensitySeq::approx(s.values(), "two-poly-windowed");
  }
  std::vector<Rational> pa(N + 1), pb(N + 1), qa(N + 1), qb(N + 1);
  pa[0] = pb[0] = qa[0] = qb[0] = Rational(1);
  for (std::size_t i = 1; i <= N; ++i) {
    pa[i] = pa[i - 1] * a;
    pb[i] = pb[i - 1] * b;
    qa[i] = qa[i - 1] * (Rational(1) - a);
    qb[i] = qb[i - 1] * (Rational(1) - b);
  }
  RationalBudget budget(opt.max_rational_bytes);
  std::vector<Rational> phi(N + 1, Rational(0));
  phi[1] = Rational(1);
  for (std::size_t n = 2; n <= N; ++n) {
    Rational acc(0);
    for (std::size_t m = 1; 2 * m <= n; ++m)
      acc += (pa[n - 2 * m] * qa[m] + pb[n - 2 * m] * qb[m]) * binomial(n - m, m) * phi[n - m];
    const Rational denom = a + b - pa[n] - pb[n];
    if (denom.is_zero()) vanishing(n);
    phi[n] = acc / denom;
    budget.add(phi[n], n);
  }
  phi.erase(phi.begin());
  return DensitySeq::exact(std::move(phi), "two-poly");
}

DensitySeq densities_linfrac(std::size_t N) {
  if (N == 0) throw ValidationError("N must be >= 1");
  return DensitySeq::exact(std::vector<Rational>(N, Rational(1)), "linfrac");
}

bool is_quadratic_measure(const EnvMeasure& mu) {
  for (const auto& c : mu.components())
    if (c.coeffs.size() > 2) return false;
  return true;
}

DensitySeq densities_auto(const EnvMeasure& mu, std::size_t N, const RecurOptions& opt) {
  require_admissible(mu);
  // phi does not see the scale of mu, so only the shape is matched.
  if (mu.is_quad_uniform()) {
    if (mu.lo() == Rational(1, 2) && mu.hi() == Rational(1)) return densities_example1(N, opt);
    if (mu.lo().is_zero() && mu.hi() == Rational(1)) return densities_example2(N, opt);
  }
  const auto& at = mu.atoms();
  if (at.size() == 2 && at[0].weight == at[1].weight && at[0].pgf.degree() == 2 && at[1].pgf.degree() == 2)
    return densities_two_poly(at[0].pgf.p(1), at[1].pgf.p(1), N, opt);
  if (opt.mode == Mode::kXFloat && is_quadratic_measure(mu) && N > 200)
    return densities_quadratic_windowed(mu, N);
  return densities_general(mu, N, opt);
}

}  // namespace rgw
