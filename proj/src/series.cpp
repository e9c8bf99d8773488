#include "rgw/series.hpp"

#include <algorithm>

namespace rgw {

namespace {

// (a * b) truncated to indices 0..order; index = power of z.
template <class T>
std::vector<T> mul_trunc(const std::vector<T>& a, const std::vector<T>& b, std::size_t order) {
  std::vector<T> c(order + 1, T(0));
  for (std::size_t i = 0; i < a.size() && i <= order; ++i) {
    if (a[i] == T(0)) continue;
    for (std::size_t j = 0; j < b.size() && i + j <= order; ++j) {
      if (b[j] == T(0)) continue;
      c[i + j] += a[i] * b[j];
    }
  }
  return c;
}

template <class T>
std::vector<T> pgf_vector(const GenFunc& P) {
  std::vector<T> v(P.degree() + 1, T(0));
  for (std::size_t j = 1; j <= P.degree(); ++j) {
    if constexpr (std::is_same_v<T, Rational>) v[j] = P.p(j);
    else v[j] = P.p(j).to_ext();
  }
  return v;
}

template <class T>
TruncSeries<T> compose_impl(const GenFunc& P, const TruncSeries<T>& S) {
  const std::size_t N = S.order();
  const std::vector<T> p = pgf_vector<T>(P);
  // Horner: S(P) = P (s_1 + P (s_2 + ...)).
  std::vector<T> acc(N + 1, T(0));
  for (std::size_t k = N; k >= 1; --k) {
    acc[0] += S[k];
    acc = mul_trunc(acc, p, N);
  }
  TruncSeries<T> out(N);
  for (std::size_t n = 1; n <= N; ++n) out.set(n, acc[n]);
  return out;
}

}  // namespace

TruncSeries<Rational> compose_poly(const GenFunc& P, const TruncSeries<Rational>& S) {
  return compose_impl(P, S);
}

TruncSeries<ExtReal> compose_poly(const GenFunc& P, const TruncSeries<ExtReal>& S) {
  return compose_impl(P, S);
}

TransferMatrix::TransferMatrix(const EnvMeasure& mu, std::size_t order)
    : order_(order), int_p1_(integrate_p1(mu)), mass_(mu.mass()) {
  if (order == 0) throw DomainError("transfer matrix needs order >= 1");
  if (int_p1_.sign() <= 0) throw ValidationError("int p1 dmu must be positive");
  a_.resize(order);
  for (std::size_t n = 1; n <= order; ++n) a_[n - 1].assign(n, Rational(0));

  for (const auto& comp : mu.components()) {
    if (comp.kind == MeasureComponent::Kind::kPoint) {
      std::vector<Rational> p(comp.coeffs.size() + 1, Rational(0));
      for (std::size_t j = 0; j < comp.coeffs.size(); ++j) p[j + 1] = comp.coeffs[j].constant();
      std::vector<Rational> pw = mul_trunc(std::vector<Rational>{Rational(1)}, p, order);
      for (std::size_t k = 1; k <= order; ++k) {
        for (std::size_t n = k; n <= order; ++n)
          if (!pw[n].is_zero()) a_[n - 1][k - 1] += comp.weight * pw[n];
        if (k < order) pw = mul_trunc(pw, p, order);
      }
    } else {
      std::vector<RPoly> p(comp.coeffs.size() + 1);
      for (std::size_t j = 0; j < comp.coeffs.size(); ++j) p[j + 1] = comp.coeffs[j];
      std::vector<RPoly> pw(order + 1);
      for (std::size_t j = 1; j < p.size() && j <= order; ++j) pw[j] = p[j];
      for (std::size_t k = 1; k <= order; ++k) {
        for (std::size_t n = k; n <= order; ++n)
          if (!pw[n].is_zero()) a_[n - 1][k - 1] += comp.integrate(pw[n]);
        if (k < order) {
          std::vector<RPoly> next(order + 1);
          for (std::size_t i = 1; i <= order; ++i) {
            if (pw[i].is_zero()) continue;
            for (std::size_t j = 1; j < p.size() && i + j <= order; ++j) next[i + j] += pw[i] * p[j];
          }
          pw = std::move(next);
        }
      }
    }
  }

  af_.resize(order);
  for (std::size_t n = 1; n <= order; ++n) {
    af_[n - 1].reserve(n);
    for (std::size_t k = 1; k <= n; ++k) af_[n - 1].push_back((a_[n - 1][k - 1] / int_p1_).to_ext());
  }
}

TruncSeries<Rational> TransferMatrix::apply(const TruncSeries<Rational>& s) const {
  const std::size_t N = std::min(order_, s.order());
  TruncSeries<Rational> out(s.order());
  for (std::size_t n = 1; n <= N; ++n) {
    Rational acc(0);
    for (std::size_t k = 1; k <= n; ++k)
      if (!s[k].is_zero() && !a_[n - 1][k - 1].is_zero()) acc += a_[n - 1][k - 1] * s[k];
    out.set(n, acc / int_p1_);
  }
  return out;
}

TruncSeries<ExtReal> TransferMatrix::apply(const TruncSeries<ExtReal>& s) const {
  const std::size_t N = std::min(order_, s.order());
  TruncSeries<ExtReal> out(s.order());
  for (std::size_t n = 1; n <= N; ++n) {
    ExtReal acc(0.0);
    for (std::size_t k = 1; k <= n; ++k) acc += af_[n - 1][k - 1] * s[k];
    out.set(n, acc);
  }
  return out;
}

std::vector<Rational> TransferMatrix::exact_fixed_point() const {
  std::vector<Rational> phi(order_);
  phi[0] = Rational(1);
  for (std::size_t n = 2; n <= order_; ++n) {
    const Rational denom = int_p1_ - a_[n - 1][n - 1];
    if (denom.is_zero())
      throw SolverError("operator fixed point: vanishing denominator at n = " + std::to_string(n));
    Rational acc(0);
    for (std::size_t k = 1; k < n; ++k) acc += a_[n - 1][k - 1] * phi[k - 1];
    phi[n - 1] = acc / denom;
  }
  return phi;
}

TruncSeries<Rational> schroder_apply(const EnvMeasure& mu, const TruncSeries<Rational>& s) {
  return TransferMatrix(mu, s.order()).apply(s);
}

TruncSeries<ExtReal> schroder_apply(const EnvMeasure& mu, const TruncSeries<ExtReal>& s) {
  return TransferMatrix(mu, s.order()).apply(s);
}

FixpointResult schroder_fixpoint(const EnvMeasure& mu, std::size_t order, double tol, std::size_t max_iter,
                                 Mode mode) {
  if (!(tol > 0)) throw ValidationError("fixpoint tolerance must be positive");
  require_admissible(mu);
  const TransferMatrix T(mu, order);

  FixpointResult res;
  TruncSeries<ExtReal> s = TruncSeries<ExtReal>::identity(order);
  bool converged = false;
  for (std::size_t t = 1; t <= max_iter; ++t) {
    TruncSeries<ExtReal> next = T.apply(s);
    ExtReal change(0.0);
    for (std::size_t n = 1; n <= order; ++n) {
      const ExtReal d = abs(next[n] - s[n]);
      const ExtReal rel = next[n].is_zero() ? d : d / abs(next[n]);
      if (rel > change) change = rel;
    }
    s = std::move(next);
    res.iterations = t;
    res.last_change = change;
    if (change.to_double() <= tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw FixpointNotConverged("operator iteration did not converge in " + std::to_string(max_iter) +
                                   " steps; last relative change " + to_string(res.last_change, 6),
                               s.tail(), res.last_change);

  if (mode == Mode::kXFloat) {
    const TruncSeries<ExtReal> hs = T.apply(s);
    ExtReal defect(0.0);
    for (std::size_t n = 1; n <= order; ++n) defect = std::max(defect, abs(hs[n] - s[n]));
    res.defect = defect;
    res.seq = DensitySeq::approx(s.tail(), "operator");
    return res;
  }

  std::vector<Rational> phi = T.exact_fixed_point();
  for (std::size_t n = 1; n <= order; ++n) {
    const ExtReal e = phi[n - 1].to_ext();
    const double rel = (abs(e - s[n]) / abs(e)).to_double();
    if (rel > std::max(1e3 * tol, 1e-26))
      throw SolverError("operator iterate and exact fixed point disagree at n = " + std::to_string(n));
  }
  TruncSeries<Rational> exact(order);
  for (std::size_t n = 1; n <= order; ++n) exact.set(n, phi[n - 1]);
  if (!(T.apply(exact) == exact)) throw SolverError("exact operator fixed point has a nonzero defect");
  res.defect = ExtReal(0.0);
  res.seq = DensitySeq::exact(std::move(phi), "operator");
  return res;
}

std::vector<TruncSeries<Rational>> schroder_iterates(const EnvMeasure& mu, std::size_t order, std::size_t steps) {
  const TransferMatrix T(mu, order);
  std::vector<TruncSeries<Rational>> out{TruncSeries<Rational>::identity(order)};
  for (std::size_t t = 0; t < steps; ++t) out.push_back(T.apply(out.back()));
  return out;
}

}  // namespace rgw
