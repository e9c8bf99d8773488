#include "rgw/asympt.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rgw {

namespace {

ExtReal npow(std::size_t n, const ExtReal& p) { return exp(log(ExtReal(static_cast<double>(n))) * p); }

bool is_nonneg_integer(const ExtComplex& a) {
  return a.im().is_zero() && a.re() == nint(a.re()) && a.re().hi() >= 0;
}

// Least squares through the normal equations, Gauss-Jordan with partial pivoting.
std::vector<ExtReal> least_squares(const std::vector<std::vector<ExtReal>>& rows, const std::vector<ExtReal>& rhs) {
  const std::size_t m = rows.front().size();
  if (rows.size() < m) throw ValidationError("too few sample points for the fit");
  std::vector<std::vector<ExtReal>> a(m, std::vector<ExtReal>(m + 1, ExtReal(0.0)));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t i = 0; i < m; ++i) {
      if (rows[r][i].is_zero()) continue;
      for (std::size_t k = 0; k < m; ++k) a[i][k] += rows[r][i] * rows[r][k];
      a[i][m] += rows[r][i] * rhs[r];
    }
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < m; ++r)
      if (abs(a[r][c]) > abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    if (a[c][c].is_zero()) throw SolverError("least-squares system is singular");
    for (std::size_t r = 0; r < m; ++r) {
      if (r == c || a[r][c].is_zero()) continue;
      const ExtReal f = a[r][c] / a[c][c];
      for (std::size_t k = c; k <= m; ++k) a[r][k] -= f * a[c][k];
    }
  }
  std::vector<ExtReal> x(m);
  for (std::size_t c = 0; c < m; ++c) x[c] = a[c][m] / a[c][c];
  return x;
}

ExtReal rms_of(const std::vector<std::vector<ExtReal>>& rows, const std::vector<ExtReal>& rhs,
               const std::vector<ExtReal>& x) {
  ExtReal ss(0.0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    ExtReal e = rhs[r];
    for (std::size_t k = 0; k < x.size(); ++k) e -= rows[r][k] * x[k];
    ss += e * e;
  }
  return sqrt(ss / static_cast<double>(rows.size()));
}

std::vector<std::size_t> log_spaced(std::size_t lo, std::size_t hi, std::size_t samples) {
  std::vector<std::size_t> ns;
  const double l0 = std::log(static_cast<double>(lo)), l1 = std::log(static_cast<double>(hi));
  for (std::size_t s = 0; s < samples; ++s) {
    const double t = samples == 1 ? 0.0 : static_cast<double>(s) / static_cast<double>(samples - 1);
    const auto n = std::clamp(static_cast<std::size_t>(std::llround(std::exp(l0 + t * (l1 - l0)))), lo, hi);
    if (ns.empty() || n != ns.back()) ns.push_back(n);
  }
  return ns;
}

}  // namespace

ExtComplex binom_asympt(const ExtComplex& alpha, std::size_t n, int terms) {
  if (n == 0) throw DomainError("binom_asympt needs n >= 1");
  if (terms != 1 && terms != 2) throw DomainError("binom_asympt supports 1 or 2 terms");
  if (is_nonneg_integer(alpha)) throw DomainError("Gamma(-alpha) has a pole at alpha = " + to_string(alpha, 6));
  const ExtComplex rg = rgamma(-alpha);
  const ExtReal nn(static_cast<double>(n));
  ExtComplex v = cpow(nn, -alpha - ExtComplex(1.0));
  if (terms == 2) v += cpow(nn, -alpha - ExtComplex(2.0)) * alpha * (alpha + ExtComplex(1.0)) * 0.5;
  v *= rg;
  return n % 2 == 0 ? v : -v;
}

ExtComplex binom_exact(const ExtComplex& alpha, std::size_t n) {
  ExtComplex v(1.0);
  for (std::size_t k = 0; k < n; ++k)
    v = v * (alpha - ExtComplex(static_cast<double>(k))) / static_cast<double>(k + 1);
  return v;
}

AsymptoticModel& AsymptoticModel::add_power(const ExtComplex& alpha, int j, const ExtComplex& c) {
  power_.push_back({alpha, j, c, !alpha.im().is_zero()});
  std::stable_sort(power_.begin(), power_.end(), [](const PowerTerm& x, const PowerTerm& y) {
    return x.alpha.re() + static_cast<double>(x.j) < y.alpha.re() + static_cast<double>(y.j);
  });
  return *this;
}

AsymptoticModel& AsymptoticModel::add_periodic(std::size_t period, int power, std::vector<ExtReal> table) {
  if (period == 0 || table.size() != period) throw ValidationError("periodic table size must equal its period");
  periodic_.push_back({period, power, std::move(table)});
  return *this;
}

ExtReal AsymptoticModel::eval(std::size_t n) const {
  if (n == 0) throw DomainError("model evaluation needs n >= 1");
  const ExtReal nn(static_cast<double>(n));
  ExtReal sum(0.0);
  for (const auto& t : power_) {
    const ExtComplex v = t.c * cpow(nn, -t.alpha - ExtComplex(static_cast<double>(t.j)));
    sum += t.paired ? v.re() * 2.0 : v.re();
  }
  for (const auto& p : periodic_) sum += p.table[n % p.period] / pow(nn, static_cast<long>(p.power));
  return sum;
}

std::string AsymptoticModel::describe() const {
  std::ostringstream os;
  for (const auto& t : power_) {
    os << (t.paired ? "2Re[" : "") << to_string(t.c, 17) << " n^(-(" << to_string(t.alpha, 17) << ")-" << t.j << ")"
       << (t.paired ? "]" : "") << "\n";
  }
  for (const auto& p : periodic_) {
    os << "period " << p.period << " / n^" << p.power << ":";
    for (const auto& v : p.table) os << " " << to_string(v, 17);
    os << "\n";
  }
  return os.str();
}

FitResult fit_leading_constant(const DensitySeq& seq, const ExtReal& power, std::size_t window_lo,
                               std::size_t window_hi) {
  if (window_hi > seq.size()) throw ValidationError("fit window exceeds the sequence");
  const std::size_t top = window_hi - 1;
  const std::size_t n = top - top % 32;
  if (n < 64 || n / 8 < std::max<std::size_t>(window_lo, 2))
    throw ValidationError("fit window too narrow: need n/8 >= window start");
  const ExtReal mp = -power;
  auto g = [&](std::size_t k) { return seq.value(k) * npow(k, mp); };
  auto avg = [&](std::size_t k) { return (g(k - 1) + g(k) * 2.0 + g(k + 1)) * 0.25; };
  auto rich = [&](std::size_t k) { return (avg(k) * 8.0 - avg(k / 2) * 6.0 + avg(k / 4)) / 3.0; };

  FitResult r;
  r.n_used = n;
  r.estimate = rich(n);
  const ExtReal half = rich(n / 2);
  r.error = abs(r.estimate - half);
  r.previous_error = abs(half - rich(n / 4));
  // Small gauges are dominated by rounding and bounded oscillations.
  r.converged = r.error <= r.previous_error * 4.0 || r.error.to_double() <= 1e-12 * abs(r.estimate).to_double();
  return r;
}

FitResult fit_leading_constant(const DensitySeq& seq, const ExtReal& power) {
  return fit_leading_constant(seq, power, seq.size() / 10, seq.size());
}

OscillationFit fit_oscillation_constants(const DensitySeq& seq, const AsymptoticModel& base,
                                         const std::vector<ExtComplex>& alphas, int j, std::size_t window_lo,
                                         std::size_t window_hi, std::size_t samples) {
  if (alphas.empty()) throw ValidationError("no exponents to fit");
  if (window_lo < 1 || window_hi > seq.size() || window_lo >= window_hi) throw ValidationError("bad fit window");
  // Rows scaled by the first basis magnitude so every n weighs about the same.
  std::vector<std::vector<ExtReal>> rows;
  std::vector<ExtReal> rhs;
  for (std::size_t n : log_spaced(window_lo, window_hi, samples)) {
    const ExtReal nn(static_cast<double>(n));
    std::vector<ExtReal> row;
    ExtReal w(0.0);
    for (const auto& a : alphas) {
      const ExtComplex v = cpow(nn, -a - ExtComplex(static_cast<double>(j)));
      if (w.is_zero()) w = ExtReal(1.0) / abs(v);
      row.push_back(v.re() * 2.0 * w);
      row.push_back(-v.im() * 2.0 * w);
    }
    rows.push_back(std::move(row));
    rhs.push_back((seq.value(n) - base.eval(n)) * w);
  }
  const auto x = least_squares(rows, rhs);
  OscillationFit out;
  for (std::size_t k = 0; k < alphas.size(); ++k) out.constants.emplace_back(x[2 * k], x[2 * k + 1]);
  out.rms = rms_of(rows, rhs, x);
  return out;
}

PeriodicExtraction extract_periodic_table(const DensitySeq& seq, const AsymptoticModel& base, std::size_t period,
                                          int power, const ExtReal& scale, std::size_t window_lo,
                                          std::size_t window_hi, int class_orders,
                                          const std::vector<ExtComplex>& alphas, int j) {
  if (period == 0) throw ValidationError("period must be positive");
  if (window_lo < 1 || window_hi > seq.size() || window_lo >= window_hi) throw ValidationError("bad fit window");
  if (class_orders < 0) throw ValidationError("class_orders must be >= 0");
  const std::size_t per_class = 1 + static_cast<std::size_t>(class_orders);
  const std::size_t m = period * per_class + 2 * alphas.size();
  std::vector<std::vector<ExtReal>> rows;
  std::vector<ExtReal> rhs;
  for (std::size_t n = window_lo; n <= window_hi; ++n) {
    const ExtReal nn(static_cast<double>(n));
    const ExtReal np = pow(nn, static_cast<long>(power));
    std::vector<ExtReal> row(m, ExtReal(0.0));
    const std::size_t k = n % period;
    ExtReal inv(1.0);
    for (std::size_t q = 0; q < per_class; ++q) {
      row[k * per_class + q] = inv;
      inv /= nn;
    }
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      const ExtComplex v = cpow(nn, -alphas[i] - ExtComplex(static_cast<double>(j))) * np / scale;
      row[period * per_class + 2 * i] = v.re() * 2.0;
      row[period * per_class + 2 * i + 1] = -v.im() * 2.0;
    }
    rows.push_back(std::move(row));
    rhs.push_back((seq.value(n) - base.eval(n)) * np / scale);
  }
  const auto x = least_squares(rows, rhs);
  PeriodicExtraction out;
  for (std::size_t k = 0; k < period; ++k) out.table.push_back(x[k * per_class]);
  for (std::size_t i = 0; i < alphas.size(); ++i)
    out.oscillation.emplace_back(x[period * per_class + 2 * i], x[period * per_class + 2 * i + 1]);
  out.rms = rms_of(rows, rhs, x);
  return out;
}

ExtReal example1_alpha() {
  static const ExtReal a = find_real_primary(CharEquation::f_example1()).alpha.re();
  return a;
}

ExtReal example1_second_coefficient(const ExtReal& a) {
  return -(a * (a.sqr() * 3.0 + a * 11.0 + 2.0)) / ((a * 9.0 + 6.0) * 2.0);
}

AsymptoticModel model_example1(const ExtReal& c) {
  if (!(c.hi() > 0)) throw DomainError("model constant must be positive");
  const ExtReal a = example1_alpha();
  AsymptoticModel m;
  m.add_power(a, 0, c);
  m.add_power(a, 1, c * example1_second_coefficient(a));
  return m;
}

ExtReal example2_a() { return ExtReal(1.0) / (ExtReal(2.0) - constants::ln2() * 2.0); }

std::vector<ExtReal> example2_rho() {
  const ExtReal l = constants::ln2();
  const ExtReal d = l * 4.0 - 2.0;
  return {(l * 11.0 - 9.0) / d, (ExtReal(19.0) - l * 31.0) / d, (ExtReal(27.0) - l * 45.0) / d, (l - 5.0) / d,
          (l * 11.0 - 9.0) / d, (l * 33.0 - 13.0) / d,          (l * 19.0 - 5.0) / d,          (l - 5.0) / d};
}

AsymptoticModel model_example2(int level) {
  if (level < 1 || level > 3) throw DomainError("Example-2 model level must be 1, 2 or 3");
  const ExtReal l = constants::ln2();
  const ExtReal A = example2_a();
  const ExtReal B = A / (l * 4.0 - 2.0);
  const ExtReal C = A * 0.5;
  AsymptoticModel m;
  m.add_power(ExtReal(-1.0), 0, A);
  m.add_power(ExtReal(-1.0), 1, A - B);
  m.add_periodic(2, 0, {C, -C});
  if (level >= 2) {
    const ExtReal s = A * (ExtReal(1.0) - l) / (l * 2.0 - 1.0);
    m.add_periodic(2, 1, {-s, s});
    m.add_periodic(4, 1, {A, -A, -A, A});  // cos(pi n/2) - sin(pi n/2)
  }
  if (level >= 3) {
    std::vector<ExtReal> rho = example2_rho();
    for (auto& r : rho) r *= A;
    m.add_periodic(8, 2, std::move(rho));
  }
  return m;
}

ExtReal two_poly_ratio(const Rational& a, const Rational& b, const ExtReal& alpha) {
  const ExtReal ea = (Rational(2) - a).to_ext(), eb = (Rational(2) - b).to_ext();
  const ExtReal xa = a.to_ext(), xb = b.to_ext();
  const ExtReal num = pow(ea, alpha - 1.0) * (xa - xa.sqr()) + pow(eb, alpha - 1.0) * (xb - xb.sqr());
  const ExtReal den = pow(ea, alpha) * (xa - 1.0) + pow(eb, alpha) * (xb - 1.0);
  return num / den;
}

AsymptoticModel model_two_poly(const Rational& a, const Rational& b, const CharRoot& root, const ExtReal& c) {
  if (!root.alpha.im().is_zero()) throw ValidationError("two-poly model needs the real primary root");
  const auto eq = CharEquation::two_poly(a, b);
  if (abs(eq.eval(root.alpha)).to_double() > 1e-15 * eq.scale().to_double())
    throw ValidationError("alpha is not a zero of the two-poly equation");
  const ExtReal al = root.alpha.re();
  AsymptoticModel m;
  m.add_power(al, 1, c);
  m.add_power(al, 2, c * two_poly_ratio(a, b, al) * al * (al + 1.0) * 0.5);
  return m;
}

}  // namespace rgw
