#include "rgw/charroots.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>
#include <numbers>
#include <sstream>
#include <tuple>

#include "rgw/parallel.hpp"

namespace rgw {

std::string to_string(CharForm f) {
  switch (f) {
    case CharForm::kGeneral: return "general";
    case CharForm::kFQuad: return "f-quad";
    case CharForm::kTwoPoly: return "two-poly";
  }
  return "?";
}

std::string to_string(Convention c) { return c == Convention::kF ? "F" : "Phi"; }

std::string to_string(RootClass c) {
  switch (c) {
    case RootClass::kPrimaryReal: return "primary-real";
    case RootClass::kReal: return "real";
    case RootClass::kComplexPair: return "complex-pair";
    case RootClass::kSpurious: return "spurious";
  }
  return "?";
}

namespace {

// E(r) = sum_j j p_j(r).
RPoly mean_poly(const MeasureComponent& c) {
  RPoly e;
  for (std::size_t j = 0; j < c.coeffs.size(); ++j) e += c.coeffs[j] * Rational(static_cast<long>(j + 1));
  return e;
}

// G(beta) = (e^{beta U} - e^{beta L}) / beta and its beta-derivative, by
// series for small |beta| where the difference cancels.
ExtComplex block_g(const ExtReal& e_hi, const ExtReal& e_lo, const ExtReal& U, const ExtReal& L,
                   const ExtComplex& beta, bool derivative) {
  if (abs(beta).to_double() < 0.5) {
    ExtComplex sum(0.0), bpow(1.0);  // beta^{k-1} or beta^{k-2}
    ExtReal upow = U, lpow = L, fact(1.0);
    for (int k = 1; k < 400; ++k) {
      if (k > 1) {
        upow *= U;
        lpow *= L;
        fact *= static_cast<double>(k);
      }
      const ExtReal dk = (upow - lpow) / fact;
      ExtComplex term;
      if (!derivative) {
        if (k > 1) bpow *= beta;
        term = bpow * dk;
      } else {
        if (k == 1) continue;
        if (k > 2) bpow *= beta;
        term = bpow * (dk * static_cast<double>(k - 1));
      }
      sum += term;
      if (k > 4 && abs(term).to_double() <= 1e-34 * std::max(abs(sum).to_double(), 1e-300)) break;
    }
    return sum;
  }
  const ExtComplex ph = cpow(e_hi, beta), pl = cpow(e_lo, beta);
  const ExtComplex g = (ph - pl) / beta;
  if (!derivative) return g;
  return (ph * U - pl * L) / beta - g / beta;
}

std::complex<double> cd(const ExtComplex& z) { return z.to_complex(); }

}  // namespace

CharEquation CharEquation::general(const EnvMeasure& mu) {
  require_admissible(mu);
  CharEquation eq;
  eq.form_ = CharForm::kGeneral;
  eq.mu_ = mu;
  eq.int_p1_ = integrate_p1(mu).to_ext();
  eq.scale_ = eq.int_p1_;
  for (const auto& comp : mu.components()) {
    const RPoly e = mean_poly(comp);
    if (comp.kind == MeasureComponent::Kind::kPoint) {
      const ExtReal ev = e.constant().to_ext();
      eq.atoms_.push_back({comp.weight.to_ext(), ev, log(ev)});
    } else if (e.degree() <= 0) {
      const ExtReal ev = e.constant().to_ext();
      eq.atoms_.push_back({(comp.weight * (comp.hi - comp.lo)).to_ext(), ev, log(ev)});
    } else if (e.degree() == 1) {
      const ExtReal elo = e.eval(comp.lo).to_ext(), ehi = e.eval(comp.hi).to_ext();
      eq.blocks_.push_back({comp.weight.to_ext(), e.coeffs()[1].to_ext(), elo, ehi, log(elo), log(ehi)});
    } else {
      eq.needs_quadrature_ = true;
    }
  }
  return eq;
}

CharEquation CharEquation::f_form(const EnvMeasure& mu) {
  if (!mu.is_quad_uniform()) throw ValidationError("F-form needs a uniform quadratic block");
  CharEquation eq = general(mu);
  eq.form_ = CharForm::kFQuad;
  eq.f_hi_ = (Rational(2) - mu.hi()).to_ext();
  eq.f_lo_ = (Rational(2) - mu.lo()).to_ext();
  eq.f_m1_ = ((mu.hi() * mu.hi() - mu.lo() * mu.lo()) / Rational(2)).to_ext();
  eq.f_log_hi_ = log(eq.f_hi_);
  eq.f_log_lo_ = log(eq.f_lo_);
  eq.scale_ = ExtReal(1.0);
  return eq;
}

CharEquation CharEquation::f_example1() { return f_form(example_measure("1")); }
CharEquation CharEquation::f_example2() { return f_form(example_measure("2")); }

CharEquation CharEquation::two_poly(const Rational& a, const Rational& b) {
  if (a.sign() <= 0 || b.sign() <= 0 || a >= Rational(1) || b >= Rational(1))
    throw DomainError("two-poly parameters must lie in (0, 1)");
  CharEquation eq = general(EnvMeasure::two_poly(a, b));
  eq.form_ = CharForm::kTwoPoly;
  eq.a_ = a;
  eq.b_ = b;
  eq.t_a_ = (Rational(2) - a).to_ext();
  eq.t_b_ = (Rational(2) - b).to_ext();
  eq.t_log_a_ = log(eq.t_a_);
  eq.t_log_b_ = log(eq.t_b_);
  eq.t_sum_ = (a + b).to_ext();
  eq.scale_ = eq.t_sum_;
  return eq;
}

std::string CharEquation::describe() const {
  switch (form_) {
    case CharForm::kGeneral: return "general: int E^a dmu - int p1 dmu, " + mu_.describe();
    case CharForm::kFQuad:
      return "F: (2-" + to_fraction_string(mu_.hi()) + ")^a - (2-" + to_fraction_string(mu_.lo()) + ")^a + " +
             to_fraction_string((mu_.hi() * mu_.hi() - mu_.lo() * mu_.lo()) / Rational(2)) + " a";
    case CharForm::kTwoPoly:
      return "two-poly: (2-" + to_fraction_string(a_) + ")^a + (2-" + to_fraction_string(b_) + ")^a - " +
             to_fraction_string(a_ + b_);
  }
  return "?";
}

ExtComplex CharEquation::general_value(const ExtComplex& alpha, bool derivative) const {
  if (needs_quadrature_) {
    const auto r = measure_integrate(mu_, [&](const std::vector<ExtReal>& p) {
      ExtReal e(0.0);
      for (std::size_t j = 0; j < p.size(); ++j) e += p[j] * static_cast<double>(j + 1);
      const ExtComplex v = cpow(e, alpha);
      return derivative ? v * log(e) : v;
    });
    return derivative ? r.value : r.value - int_p1_;
  }
  ExtComplex sum(0.0);
  for (const auto& a : atoms_) {
    const ExtComplex v = cpow(a.e, alpha) * a.w;
    sum += derivative ? v * a.log_e : v;
  }
  const ExtComplex beta = alpha + ExtComplex(1.0);
  for (const auto& b : blocks_) sum += block_g(b.e_hi, b.e_lo, b.log_hi, b.log_lo, beta, derivative) * (b.w / b.c1);
  return derivative ? sum : sum - int_p1_;
}

ExtComplex CharEquation::eval(const ExtComplex& alpha) const {
  switch (form_) {
    case CharForm::kGeneral: return general_value(alpha, false);
    case CharForm::kFQuad: return cpow(f_hi_, alpha) - cpow(f_lo_, alpha) + alpha * f_m1_;
    case CharForm::kTwoPoly: return cpow(t_a_, alpha) + cpow(t_b_, alpha) - t_sum_;
  }
  return {};
}

ExtComplex CharEquation::deriv(const ExtComplex& alpha) const {
  switch (form_) {
    case CharForm::kGeneral: return general_value(alpha, true);
    case CharForm::kFQuad:
      return cpow(f_hi_, alpha) * f_log_hi_ - cpow(f_lo_, alpha) * f_log_lo_ + ExtComplex(f_m1_);
    case CharForm::kTwoPoly: return cpow(t_a_, alpha) * t_log_a_ + cpow(t_b_, alpha) * t_log_b_;
  }
  return {};
}

std::optional<ExtReal> CharEquation::moment_lower_bound() const {
  // For Re a < 0: |int E^a| <= mass (min E)^{Re a}, and a zero needs this to
  // reach int p1.
  Rational min_e;
  bool first = true;
  for (const auto& comp : mu_.components()) {
    const RPoly e = mean_poly(comp);
    std::vector<Rational> pts;
    if (comp.kind == MeasureComponent::Kind::kPoint) {
      pts.push_back(e.constant());
    } else {
      if (e.degree() > 1) return std::nullopt;
      pts = {e.eval(comp.lo), e.eval(comp.hi)};
    }
    for (const auto& v : pts)
      if (first || v < min_e) {
        min_e = v;
        first = false;
      }
  }
  if (first || min_e <= Rational(1)) return std::nullopt;
  ExtReal bound = log((integrate_p1(mu_) / mu_.mass()).to_ext()) / log(min_e.to_ext());
  if (convention() == Convention::kF) bound += 1.0;
  return bound;
}

ExtComplex char_eval(const CharEquation& eq, const ExtComplex& alpha) { return eq.eval(alpha); }

void RootBox::validate() const {
  if (!(re_min < re_max)) throw ValidationError("root box needs re_min < re_max");
  if (!(im_min < im_max)) throw ValidationError("root box needs im_min < im_max");
  if (im_min.hi() < 0) throw ValidationError("root box needs im_min >= 0 (conjugates are implied)");
}

RootBox default_root_box(const ExtReal& primary) {
  return {primary - 0.5, primary + 6.0, ExtReal(0.0), ExtReal(40.0)};
}

CharRoot find_real_primary(const CharEquation& eq, double scan_min) {
  auto f = [&](const ExtReal& a) { return eq.eval(ExtComplex(a)).re(); };
  const double step = 1.0 / 16.0;
  std::optional<ExtReal> exact;
  std::optional<std::pair<ExtReal, ExtReal>> bracket;
  std::ostringstream trace;
  ExtReal prev_a(1.0);
  ExtReal prev = f(prev_a);
  if (prev.is_zero()) exact = prev_a;
  for (long k = 1;; ++k) {
    const ExtReal a(1.0 - static_cast<double>(k) * step);
    if (a.to_double() < scan_min) break;
    const ExtReal v = f(a);
    if (k % 64 == 0) trace << " f(" << a.to_double() << ")=" << v.to_double();
    if (v.is_zero()) {
      exact = a;
      bracket.reset();
    } else if (!prev.is_zero() && (v.hi() < 0) != (prev.hi() < 0)) {
      bracket = {{a, prev_a}};
      exact.reset();
    }
    prev = v;
    prev_a = a;
  }

  CharRoot root;
  root.cls = RootClass::kPrimaryReal;
  root.convention = eq.convention();
  if (exact) {
    root.alpha = *exact;
    root.residual = ExtReal(0.0);
    return root;
  }
  if (!bracket) throw SolverError("no sign change of chi on [" + std::to_string(scan_min) + ", 1]:" + trace.str());

  ExtReal lo = bracket->first, hi = bracket->second;
  const bool lo_neg = f(lo).hi() < 0;
  for (int it = 0; it < 110; ++it) {
    const ExtReal mid = (lo + hi) * 0.5;
    const ExtReal v = f(mid);
    if (v.is_zero()) {
      lo = hi = mid;
      break;
    }
    if ((v.hi() < 0) == lo_neg) lo = mid;
    else hi = mid;
  }
  ExtReal a = (lo + hi) * 0.5;
  for (int it = 0; it < 4; ++it) {
    const ExtReal d = eq.deriv(ExtComplex(a)).re();
    if (d.is_zero()) break;
    const ExtReal next = a - f(a) / d;
    if (abs(f(next)) < abs(f(a))) a = next;
    else break;
  }
  root.alpha = a;
  root.residual = abs(f(a));
  if (root.residual > eq.scale() * 1e-25)
    throw SolverError("real zero residual " + to_string(root.residual, 6) + " above 1e-25");
  return root;
}

namespace {

struct EdgeHit {};

struct Cell {
  double x0, x1, y0, y1;
  int count = 0;
  int depth = 0;
};

class BoxSolver {
 public:
  BoxSolver(const CharEquation& eq, double tol) : eq_(eq), tol_(tol), scale_(eq.scale().to_double()) {}

  std::complex<double> f(double x, double y) const {
    const auto v = cd(eq_.eval(ExtComplex(ExtReal(x), ExtReal(y))));
    if (std::abs(v) < tol_ * 1e3 * scale_) throw EdgeHit{};
    return v;
  }

  double segment(std::complex<double> za, std::complex<double> fa, std::complex<double> zb,
                 std::complex<double> fb, int depth) const {
    const double d = std::arg(fb / fa);
    if (std::abs(d) <= 0.5) return d;
    if (depth >= 48) throw EdgeHit{};
    const auto zm = 0.5 * (za + zb);
    const auto fm = f(zm.real(), zm.imag());
    return segment(za, fa, zm, fm, depth + 1) + segment(zm, fm, zb, fb, depth + 1);
  }

  double edge(std::complex<double> za, std::complex<double> zb, int refine) const {
    const double len = std::abs(zb - za);
    const int n = std::max(8, static_cast<int>(std::ceil(len * 8.0))) << refine;
    double total = 0;
    auto fa = f(za.real(), za.imag());
    for (int i = 1; i <= n; ++i) {
      const auto zb_i = za + (zb - za) * (static_cast<double>(i) / n);
      const auto fb_i = f(zb_i.real(), zb_i.imag());
      const auto za_i = za + (zb - za) * (static_cast<double>(i - 1) / n);
      total += segment(za_i, fa, zb_i, fb_i, 0);
      fa = fb_i;
    }
    return total;
  }

  // Winding number of chi around the cell; throws EdgeHit near a zero.
  int winding(const Cell& c) const {
    const std::complex<double> a(c.x0, c.y0), b(c.x1, c.y0), d(c.x1, c.y1), e(c.x0, c.y1);
    for (int refine = 0; refine < 3; ++refine) {
      const double w = (edge(a, b, refine) + edge(b, d, refine) + edge(d, e, refine) + edge(e, a, refine)) /
                       (2 * std::numbers::pi);
      const double r = std::round(w);
      if (std::abs(w - r) < 0.05) return static_cast<int>(r);
    }
    throw SolverError("winding number did not settle on cell " + describe(c));
  }

  static std::string describe(const Cell& c) {
    std::ostringstream os;
    os.precision(17);
    os << "[" << c.x0 << ", " << c.x1 << "] x [" << c.y0 << ", " << c.y1 << "]";
    return os.str();
  }

  std::optional<CharRoot> newton(const Cell& c, std::complex<double> start) const {
    ExtComplex a(ExtReal(start.real()), ExtReal(start.imag()));
    const bool straddles = c.y0 < 0 && c.y1 > 0;
    bool done = false;
    for (int it = 0; it < 80; ++it) {
      const ExtComplex d = eq_.deriv(a);
      if (abs(d).is_zero()) return std::nullopt;
      const ExtComplex step = eq_.eval(a) / d;
      a -= step;
      const double mag = std::abs(cd(a));
      if (!std::isfinite(mag)) return std::nullopt;
      if (abs(step).to_double() <= 1e-30 * std::max(1.0, mag)) {
        done = true;
        break;
      }
    }
    if (!done) return std::nullopt;
    if (straddles && std::abs(a.im().to_double()) < 1e-15 * std::max(1.0, std::abs(a.re().to_double()))) {
      ExtReal x = a.re();
      for (int it = 0; it < 3; ++it) {
        const ExtReal d = eq_.deriv(ExtComplex(x)).re();
        if (d.is_zero()) break;
        x -= eq_.eval(ExtComplex(x)).re() / d;
      }
      a = ExtComplex(x);
    }
    const double x = a.re().to_double(), y = a.im().to_double();
    const double slack = 1e-12 * std::max({1.0, std::abs(x), std::abs(y)});
    if (x < c.x0 - slack || x > c.x1 + slack || y < c.y0 - slack || y > c.y1 + slack) return std::nullopt;
    CharRoot r;
    r.alpha = a;
    r.residual = abs(eq_.eval(a));
    r.convention = eq_.convention();
    if (r.residual.to_double() > tol_ * scale_) return std::nullopt;
    return r;
  }

  // Splits along the longer side, nudging the cut away from zeros.
  std::pair<Cell, Cell> split(const Cell& c) const {
    static constexpr double kFrac[] = {0.5123, 0.4571, 0.5389, 0.4219, 0.5813, 0.3917};
    for (double fr : kFrac) {
      Cell a = c, b = c;
      a.depth = b.depth = c.depth + 1;
      if (c.x1 - c.x0 >= c.y1 - c.y0) {
        a.x1 = b.x0 = c.x0 + fr * (c.x1 - c.x0);
      } else {
        a.y1 = b.y0 = c.y0 + fr * (c.y1 - c.y0);
      }
      try {
        a.count = winding(a);
        b.count = winding(b);
      } catch (const EdgeHit&) {
        continue;
      }
      if (a.count + b.count != c.count)
        throw SolverError("winding audit failed: cell " + describe(c) + " counts " + std::to_string(c.count) +
                          " but halves count " + std::to_string(a.count) + " + " + std::to_string(b.count));
      return {a, b};
    }
    throw SolverError("could not cut cell " + describe(c) + " away from zeros");
  }

  std::vector<CharRoot> solve(const Cell& c) const {
    if (c.count == 0) return {};
    if (c.count < 0) throw SolverError("negative winding number on cell " + describe(c));
    if (c.count == 1) {
      const double cx = 0.5 * (c.x0 + c.x1), cy = 0.5 * (c.y0 + c.y1);
      const double hx = 0.25 * (c.x1 - c.x0), hy = 0.25 * (c.y1 - c.y0);
      const std::complex<double> starts[] = {
          {cx, cy}, {cx - hx, cy - hy}, {cx + hx, cy + hy}, {cx - hx, cy + hy}, {cx + hx, cy - hy}};
      for (const auto& s : starts)
        if (auto r = newton(c, s)) return {*r};
    }
    if (c.depth >= 80) {
      throw SolverError("cell " + describe(c) + " has winding number " + std::to_string(c.count) +
                        " but Newton polished a different number of zeros");
    }
    const auto [a, b] = split(c);
    auto out = solve(a);
    auto more = solve(b);
    out.insert(out.end(), more.begin(), more.end());
    return out;
  }

 private:
  const CharEquation& eq_;
  double tol_;
  double scale_;
};

}  // namespace

std::vector<CharRoot> find_roots_in_box(const CharEquation& eq, RootBox box, double tol, std::size_t threads) {
  box.validate();
  if (!(tol > 0)) throw ValidationError("tolerance must be positive");
  const BoxSolver solver(eq, tol);
  const bool upper_half = box.im_min.is_zero();

  Cell top{box.re_min.to_double(), box.re_max.to_double(), box.im_min.to_double(), box.im_max.to_double()};
  // Real zeros sit on im = 0; drop the lower edge below the axis and discard
  // the conjugate copies afterwards.
  if (upper_half) top.y0 = -std::min(0.1, top.y1 / 64.0);
  for (int attempt = 0;; ++attempt) {
    try {
      top.count = solver.winding(top);
      break;
    } catch (const EdgeHit&) {
      if (attempt >= 8) throw SolverError("box edge keeps hitting a zero of chi");
      const double nudge = 1e-7 * (attempt + 1) * std::max(1.0, top.x1 - top.x0);
      top.x0 -= nudge;
      top.x1 += nudge;
      top.y1 += nudge;
      top.y0 = upper_half ? top.y0 * 1.1 : top.y0 - nudge;
    }
  }

  // Breadth-first cuts until there is enough work to spread, then each cell
  // is solved on its own.
  const std::size_t nthreads = resolve_threads(threads);
  std::deque<Cell> work{top};
  std::vector<Cell> ready;
  while (!work.empty()) {
    Cell c = work.front();
    work.pop_front();
    if (c.count == 0) continue;
    if (c.count == 1 || work.size() + ready.size() >= 4 * nthreads) {
      ready.push_back(c);
      continue;
    }
    const auto [a, b] = solver.split(c);
    work.push_back(a);
    work.push_back(b);
  }
  std::vector<std::vector<CharRoot>> found(ready.size());
  parallel_for(ready.size(), nthreads, [&](std::size_t i) { found[i] = solver.solve(ready[i]); });

  std::vector<CharRoot> roots;
  for (std::size_t i = 0; i < ready.size(); ++i) {
    if (found[i].size() != static_cast<std::size_t>(ready[i].count))
      throw SolverError("cell " + BoxSolver::describe(ready[i]) + " winding " + std::to_string(ready[i].count) +
                        " but " + std::to_string(found[i].size()) + " zeros polished");
    for (auto& r : found[i]) {
      if (upper_half && r.alpha.im().hi() < 0) continue;
      roots.push_back(std::move(r));
    }
  }

  std::optional<CharRoot> primary;
  try {
    primary = find_real_primary(eq, std::min(-64.0, box.re_min.to_double() - 1.0));
  } catch (const SolverError&) {
  }
  for (auto& r : roots) {
    if (r.alpha.im().is_zero()) {
      r.cls = primary && abs(r.alpha.re() - primary->alpha.re()).to_double() <=
                             1e-15 * std::max(1.0, std::abs(primary->alpha.re().to_double()))
                  ? RootClass::kPrimaryReal
                  : RootClass::kReal;
    } else {
      r.cls = RootClass::kComplexPair;
    }
    if (primary && r.alpha.re().to_double() < primary->alpha.re().to_double() - 1e-12)
      throw SolverError("zero " + to_string(r.alpha, 20) + " lies left of the primary real zero");
  }
  // Real parts equal to ~1e-12 count as ties, so a real zero leads its column.
  auto key = [](const CharRoot& r) {
    return std::make_tuple(std::llround(r.alpha.re().to_double() * 1e12), r.alpha.im().to_double(),
                           r.alpha.re().to_double());
  };
  std::sort(roots.begin(), roots.end(), [&](const CharRoot& a, const CharRoot& b) { return key(a) < key(b); });
  return roots;
}

std::vector<CharRoot> filter_spurious(std::vector<CharRoot> roots, const CharEquation& reference_eq, double tol) {
  if (reference_eq.form() != CharForm::kGeneral) throw ValidationError("reference equation must be the general form");
  for (auto& r : roots) {
    ExtComplex a = r.alpha;
    if (r.convention == Convention::kF) a -= ExtComplex(1.0);
    const ExtReal res = abs(reference_eq.eval(a));
    if (res.to_double() > tol * reference_eq.scale().to_double()) r.cls = RootClass::kSpurious;
  }
  return roots;
}

}  // namespace rgw
