#include "rgw/model.hpp"

#include <algorithm>
#include <sstream>

namespace rgw {

// ---- RPoly ----------------------------------------------------------------

void RPoly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Rational RPoly::eval(const Rational& x) const {
  Rational s(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) s = s * x + *it;
  return s;
}

ExtReal RPoly::eval(const ExtReal& x) const {
  ExtReal s(0.0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) s = s * x + it->to_ext();
  return s;
}

Rational RPoly::integrate(const Rational& lo, const Rational& hi) const {
  Rational s(0);
  Rational plo = lo, phi = hi;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (!c_[i].is_zero()) s += c_[i] * (phi - plo) / Rational(static_cast<long>(i + 1));
    plo *= lo;
    phi *= hi;
  }
  return s;
}

RPoly operator+(const RPoly& a, const RPoly& b) {
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
  return RPoly(std::move(c));
}

RPoly operator-(const RPoly& a, const RPoly& b) { return a + b * Rational(-1); }

RPoly operator*(const RPoly& a, const RPoly& b) {
  if (a.is_zero() || b.is_zero()) return RPoly();
  std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return RPoly(std::move(c));
}

RPoly operator*(const RPoly& a, const Rational& s) {
  std::vector<Rational> c = a.c_;
  for (auto& x : c) x *= s;
  return RPoly(std::move(c));
}

// ---- GenFunc ----------------------------------------------------------------

GenFunc::GenFunc(std::vector<Rational> coeffs, std::size_t d_max) : p_(std::move(coeffs)) {
  while (!p_.empty() && p_.back().is_zero()) p_.pop_back();
  if (p_.empty()) throw ValidationError("generating function has no positive coefficient");
  if (p_.size() > d_max)
    throw ValidationError("generating function degree " + std::to_string(p_.size()) +
                          " exceeds d_max = " + std::to_string(d_max));
  Rational sum(0);
  for (std::size_t j = 0; j < p_.size(); ++j) {
    if (p_[j].sign() < 0)
      throw ValidationError("negative offspring probability p_" + std::to_string(j + 1));
    sum += p_[j];
  }
  if (sum != Rational(1))
    throw ValidationError("offspring probabilities sum to " + to_fraction_string(sum) + ", not 1");
}

GenFunc GenFunc::quadratic(const Rational& r) {
  if (r.sign() < 0 || r > Rational(1)) throw ValidationError("quadratic family needs 0 <= r <= 1");
  return GenFunc({r, Rational(1) - r});
}

GenFunc GenFunc::linear_fractional(const Rational& r, std::size_t d) {
  if (r.sign() <= 0 || r >= Rational(1)) throw ValidationError("linear-fractional family needs 0 < r < 1");
  if (d < 2) throw ValidationError("linear-fractional truncation needs degree >= 2");
  std::vector<Rational> p(d);
  Rational rp(1);
  for (std::size_t j = 0; j + 1 < d; ++j) {
    p[j] = (Rational(1) - r) * rp;
    rp *= r;
  }
  p[d - 1] = rp;
  return GenFunc(std::move(p), d);
}

ExtComplex pgf_eval(const GenFunc& P, const ExtComplex& z) {
  ExtComplex s(0.0);
  const auto& p = P.coeffs();
  for (auto it = p.rbegin(); it != p.rend(); ++it) s = s * z + ExtComplex(it->to_ext());
  return s * z;
}

Rational pgf_eval(const GenFunc& P, const Rational& z) {
  Rational s(0);
  const auto& p = P.coeffs();
  for (auto it = p.rbegin(); it != p.rend(); ++it) s = s * z + *it;
  return s * z;
}

Rational pgf_mean(const GenFunc& P) {
  Rational s(0);
  for (std::size_t j = 1; j <= P.degree(); ++j) s += Rational(static_cast<long>(j)) * P.p(j);
  return s;
}

// ---- EnvMeasure -------------------------------------------------------------

Rational MeasureComponent::integrate(const RPoly& f) const {
  if (kind == Kind::kPoint) {
    if (!f.is_constant()) throw DomainError("point component integrand depends on r");
    return weight * f.constant();
  }
  return weight * f.integrate(lo, hi);
}

EnvMeasure EnvMeasure::finite(std::vector<Atom> atoms) {
  if (atoms.empty()) throw ValidationError("finite measure needs at least one atom");
  EnvMeasure m;
  for (const auto& a : atoms) {
    if (a.weight.sign() <= 0) throw ValidationError("atom weights must be positive");
    MeasureComponent c;
    c.kind = MeasureComponent::Kind::kPoint;
    c.weight = a.weight;
    for (const auto& p : a.pgf.coeffs()) c.coeffs.emplace_back(p);
    m.components_.push_back(std::move(c));
  }
  m.atoms_ = std::move(atoms);
  return m;
}

EnvMeasure EnvMeasure::quad_uniform(const Rational& lo, const Rational& hi, const Rational& density) {
  if (lo.sign() < 0 || hi > Rational(1) || !(lo < hi))
    throw ValidationError("quad-uniform needs 0 <= lo < hi <= 1");
  if (density.sign() <= 0) throw ValidationError("quad-uniform density must be positive");
  EnvMeasure m;
  m.quad_ = true;
  MeasureComponent c;
  c.kind = MeasureComponent::Kind::kUniform;
  c.weight = density;
  c.lo = lo;
  c.hi = hi;
  c.coeffs = {RPoly::r(), RPoly(Rational(1)) - RPoly::r()};
  m.components_.push_back(std::move(c));
  return m;
}

EnvMeasure EnvMeasure::two_poly(const Rational& a, const Rational& b) {
  return finite({Atom{Rational(1), GenFunc::quadratic(a)}, Atom{Rational(1), GenFunc::quadratic(b)}});
}

std::size_t EnvMeasure::max_degree() const {
  std::size_t d = 0;
  for (const auto& c : components_) d = std::max(d, c.coeffs.size());
  return d;
}

Rational EnvMeasure::mass() const {
  Rational s(0);
  for (const auto& c : components_) s += c.integrate(RPoly(Rational(1)));
  return s;
}

EnvMeasure EnvMeasure::scaled(const Rational& c) const {
  if (c.sign() <= 0) throw ValidationError("measure scale must be positive");
  EnvMeasure m = *this;
  for (auto& comp : m.components_) comp.weight *= c;
  for (auto& a : m.atoms_) a.weight *= c;
  return m;
}

std::string EnvMeasure::describe() const {
  std::ostringstream os;
  if (quad_) {
    os << "quad-uniform(" << lo() << ", " << hi() << ")";
    if (density() != Rational(1)) os << " density " << density();
    return os.str();
  }
  os << "finite[";
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (i) os << "; ";
    os << atoms_[i].weight << ":";
    const auto& p = atoms_[i].pgf.coeffs();
    for (std::size_t j = 0; j < p.size(); ++j) os << (j ? "," : "") << p[j];
  }
  os << "]";
  return os.str();
}

Rational measure_integrate(const EnvMeasure& mu, const PolyIntegrand& f) {
  Rational s(0);
  for (const auto& c : mu.components()) s += c.integrate(f(c.coeffs));
  return s;
}

Rational integrate_p1(const EnvMeasure& mu) { return integrate_p1_pow(mu, 1); }

Rational integrate_p1_pow(const EnvMeasure& mu, unsigned long k) {
  Rational s(0);
  for (const auto& c : mu.components()) {
    if (c.kind == MeasureComponent::Kind::kPoint) {
      s += c.weight * pow(c.coeffs.front().constant(), static_cast<long>(k));
    } else if (c.coeffs.front() == RPoly::r()) {
      const long e = static_cast<long>(k) + 1;
      s += c.weight * (pow(c.hi, e) - pow(c.lo, e)) / Rational(e);
    } else {
      RPoly p(Rational(1));
      for (unsigned long i = 0; i < k; ++i) p *= c.coeffs.front();
      s += c.integrate(p);
    }
  }
  return s;
}

// ---- quadrature -------------------------------------------------------------

const GaussRule& gauss_legendre_64() {
  static const GaussRule rule = [] {
    constexpr int n = 64;
    GaussRule g;
    g.nodes.resize(n);
    g.weights.resize(n);
    auto legendre = [](const ExtReal& x, ExtReal& pn, ExtReal& pn1) {
      ExtReal p0(1.0), p1 = x;
      for (int k = 2; k <= n; ++k) {
        const ExtReal p2 = (x * p1 * static_cast<double>(2 * k - 1) - p0 * static_cast<double>(k - 1)) /
                           static_cast<double>(k);
        p0 = p1;
        p1 = p2;
      }
      pn = p1;
      pn1 = p0;
    };
    for (int i = 0; i < n / 2; ++i) {
      ExtReal x(std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5)));
      ExtReal pn, pn1, dp;
      for (int it = 0; it < 8; ++it) {
        legendre(x, pn, pn1);
        dp = (x * pn - pn1) * static_cast<double>(n) / (x.sqr() - 1.0);
        x -= pn / dp;
      }
      legendre(x, pn, pn1);
      dp = (x * pn - pn1) * static_cast<double>(n) / (x.sqr() - 1.0);
      const ExtReal w = ExtReal(2.0) / ((1.0 - x.sqr()) * dp.sqr());
      g.nodes[i] = -x;
      g.weights[i] = w;
      g.nodes[n - 1 - i] = x;
      g.weights[n - 1 - i] = w;
    }
    return g;
  }();
  return rule;
}

namespace {

ExtReal magnitude(const ExtReal& x) { return abs(x); }
ExtReal magnitude(const ExtComplex& z) { return abs(z); }

template <class T, class F>
T panel_sum(const MeasureComponent& c, const F& f, int panels) {
  const GaussRule& g = gauss_legendre_64();
  const ExtReal lo = c.lo.to_ext(), hi = c.hi.to_ext();
  const ExtReal h = (hi - lo) / static_cast<double>(panels);
  T total(0.0);
  std::vector<ExtReal> vals(c.coeffs.size());
  for (int p = 0; p < panels; ++p) {
    const ExtReal a = lo + h * static_cast<double>(p);
    const ExtReal half = h.ldexp(-1);
    const ExtReal mid = a + half;
    T s(0.0);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const ExtReal r = mid + half * g.nodes[i];
      for (std::size_t j = 0; j < vals.size(); ++j) vals[j] = c.coeffs[j].eval(r);
      s += f(vals) * g.weights[i];
    }
    total += s * half;
  }
  return total * c.weight.to_ext();
}

template <class T, class F>
std::pair<T, ExtReal> integrate_impl(const EnvMeasure& mu, const F& f, double rel_tol) {
  T total(0.0);
  ExtReal err(0.0);
  for (const auto& c : mu.components()) {
    if (c.kind == MeasureComponent::Kind::kPoint) {
      std::vector<ExtReal> vals;
      for (const auto& p : c.coeffs) vals.push_back(p.constant().to_ext());
      total += f(vals) * c.weight.to_ext();
      continue;
    }
    T prev = panel_sum<T>(c, f, 1);
    bool done = false;
    ExtReal delta(0.0);
    for (int panels = 2; panels <= 1024; panels *= 2) {
      const T cur = panel_sum<T>(c, f, panels);
      delta = magnitude(cur - prev);
      prev = cur;
      if (delta.to_double() <= rel_tol * magnitude(cur).to_double() || delta.to_double() < 1e-300) {
        done = true;
        break;
      }
    }
    if (!done)
      throw SolverError("quadrature did not reach relative error " + std::to_string(rel_tol) +
                        "; achieved change " + to_string(delta, 6));
    total += prev;
    err += delta;
  }
  return {total, err};
}

}  // namespace

QuadResult measure_integrate(const EnvMeasure& mu, const RealIntegrand& f, double rel_tol) {
  auto [v, e] = integrate_impl<ExtReal>(mu, f, rel_tol);
  return {v, e};
}

ComplexQuadResult measure_integrate(const EnvMeasure& mu, const ComplexIntegrand& f, double rel_tol) {
  auto [v, e] = integrate_impl<ExtComplex>(mu, f, rel_tol);
  return {v, e};
}

// ---- validation -------------------------------------------------------------

MeasureReport validate_measure(const EnvMeasure& mu) {
  MeasureReport r;
  r.int_p1 = integrate_p1(mu);
  r.int_p1_sq = integrate_p1_pow(mu, 2);
  r.p1_positive = r.int_p1.sign() > 0;
  r.ratio_below_one = r.p1_positive && r.int_p1_sq < r.int_p1;
  r.ok = r.p1_positive && r.ratio_below_one;
  if (!r.p1_positive) {
    r.message = "inadmissible measure: integral of p1 is " + to_fraction_string(r.int_p1) + ", must be > 0";
  } else if (!r.ratio_below_one) {
    r.message = "inadmissible measure: int p1^2 / int p1 = " + to_fraction_string(r.int_p1_sq / r.int_p1) +
                ", must be < 1";
  } else {
    r.message = "admissible: int p1 = " + to_fraction_string(r.int_p1) +
                ", int p1^2 / int p1 = " + to_fraction_string(r.int_p1_sq / r.int_p1);
  }
  return r;
}

void require_admissible(const EnvMeasure& mu) {
  const MeasureReport r = validate_measure(mu);
  if (!r.ok) throw ValidationError(r.message);
}

Rational emulation_parameter() { return parse_rational("0.6791281732038788538781"); }

EnvMeasure example_measure(const std::string& name) {
  if (name == "0") {
    std::vector<Atom> atoms;
    for (const Rational& r : {Rational(1, 4), Rational(1, 2), Rational(2, 3)})
      atoms.push_back({Rational(1), GenFunc::linear_fractional(r)});
    return EnvMeasure::finite(std::move(atoms));
  }
  if (name == "1") return EnvMeasure::quad_uniform(Rational(1, 2), Rational(1));
  if (name == "2") return EnvMeasure::quad_uniform(Rational(0), Rational(1));
  if (name == "3a") return EnvMeasure::two_poly(Rational(7, 16), Rational(3, 4));
  if (name == "3b") return EnvMeasure::two_poly(Rational(1, 2), Rational(3, 4));
  if (name == "emu1") return EnvMeasure::two_poly(emulation_parameter(), emulation_parameter());
  throw ValidationError("unknown example '" + name + "' (expected 0, 1, 2, 3a, 3b or emu1)");
}

}  // namespace rgw
