#include "rgw/picard.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rgw/error.hpp"

namespace rgw {

std::string to_string(QuadRule q) { return q == QuadRule::kRectangle ? "rectangle" : "trapezoid"; }

QuadRule parse_quad_rule(const std::string& s) {
  if (s == "rectangle") return QuadRule::kRectangle;
  if (s == "trapezoid") return QuadRule::kTrapezoid;
  throw ValidationError("unknown quadrature rule '" + s + "'");
}

GridFunction GridFunction::sample(std::size_t cells, const std::function<ExtReal(const ExtReal&)>& f,
                                  QuadRule rule) {
  if (cells < 2) throw ValidationError("grid needs at least two cells");
  GridFunction g;
  g.step = ExtReal(1.0) / static_cast<double>(cells);
  g.rule = rule;
  g.h.resize(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) g.h[i] = f(g.node(i));
  g.validate();
  return g;
}

ExtReal GridFunction::node(std::size_t i) const {
  return ExtReal(static_cast<double>(i)) / static_cast<double>(cells());
}

ExtReal GridFunction::operator()(const ExtReal& z) const {
  const std::size_t m = cells();
  if (z <= ExtReal(0.0)) return h.front();
  if (z >= ExtReal(1.0)) return h.back();
  const ExtReal t = z * static_cast<double>(m);
  auto k = static_cast<std::size_t>(floor(t).to_double());
  k = std::min(k, m - 1);
  const ExtReal f = t - static_cast<double>(k);
  return h[k] + (h[k + 1] - h[k]) * f;
}

void GridFunction::validate() const {
  if (h.size() < 3) throw ValidationError("grid function needs at least two cells");
  for (std::size_t i = 0; i < h.size(); ++i)
    if (!h[i].is_finite()) throw ValidationError("grid function is not finite at node " + std::to_string(i));
}

std::size_t cells_for_step(double step) {
  if (!(step > 0.0) || step > 0.5) throw ValidationError("grid step must lie in (0, 1/2]");
  const double m = std::round(1.0 / step);
  if (std::abs(m * step - 1.0) > 1e-9) throw ValidationError("grid step must divide 1");
  return static_cast<std::size_t>(m);
}

GridFunction h0_const(std::size_t cells, const ExtReal& c, QuadRule rule) {
  return GridFunction::sample(cells, [&](const ExtReal&) { return c; }, rule);
}

GridFunction h0_step(std::size_t cells, QuadRule rule) {
  return GridFunction::sample(
      cells, [](const ExtReal& z) { return z <= ExtReal(0.5) ? ExtReal(0.0) : ExtReal(2.0) - z; }, rule);
}

namespace {

// Precomputed weights and the position of z_i^2 on the grid.
struct Kernel {
  std::size_t m = 0;
  QuadRule rule = QuadRule::kRectangle;
  ExtReal dz;
  std::vector<ExtReal> w;      // 1/(1+sqrt u) at midpoints or nodes
  std::vector<std::size_t> k;  // z_i^2 in [u_k, u_{k+1}]
  std::vector<ExtReal> f;      // fractional part
  std::vector<ExtReal> inv_gap;  // 1/(1 - z_i)

  explicit Kernel(const GridFunction& g) : m(g.cells()), rule(g.rule), dz(g.step) {
    const double md = static_cast<double>(m);
    const std::size_t nw = rule == QuadRule::kRectangle ? m : m + 1;
    w.resize(nw);
    for (std::size_t j = 0; j < nw; ++j) {
      const ExtReal u = rule == QuadRule::kRectangle ? (ExtReal(static_cast<double>(j)) + 0.5) / md
                                                     : ExtReal(static_cast<double>(j)) / md;
      w[j] = ExtReal(1.0) / (sqrt(u) + 1.0);
    }
    k.resize(m + 1);
    f.resize(m + 1);
    inv_gap.resize(m + 1);
    for (std::size_t i = 0; i <= m; ++i) {
      // z_i^2 m = i^2 / m, exact in integers
      const unsigned long long sq = static_cast<unsigned long long>(i) * i;
      k[i] = static_cast<std::size_t>(sq / m);
      f[i] = ExtReal(static_cast<double>(sq % m)) / md;
      if (k[i] == m) k[i] = m - 1, f[i] = ExtReal(1.0);
      if (i < m) inv_gap[i] = md / static_cast<double>(m - i);
    }
  }

  // P[i] = int_0^{u_i} H(u)/(1+sqrt u) du
  std::vector<ExtReal> prefix(const std::vector<ExtReal>& h) const {
    std::vector<ExtReal> p(m + 1);
    p[0] = ExtReal(0.0);
    for (std::size_t j = 0; j < m; ++j) {
      const ExtReal c = rule == QuadRule::kRectangle ? (h[j] + h[j + 1]) * 0.5 * w[j]
                                                     : (h[j] * w[j] + h[j + 1] * w[j + 1]) * 0.5;
      p[j + 1] = p[j] + c * dz;
    }
    return p;
  }

  ExtReal at_square(const std::vector<ExtReal>& p, std::size_t i) const {
    return p[k[i]] + (p[k[i] + 1] - p[k[i]]) * f[i];
  }
};

void check_finite(const std::vector<ExtReal>& h, const char* what, int iter) {
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!h[i].is_finite()) {
      std::ostringstream os;
      os << what << ": non-finite value at node " << i << " in iteration " << iter;
      throw SolverError(os.str());
    }
  }
}

}  // namespace

ExtReal sup_change(const GridFunction& a, const GridFunction& b, const ExtReal& z_max) {
  if (a.h.size() != b.h.size()) throw ValidationError("grid functions live on different grids");
  ExtReal best(0.0);
  for (std::size_t i = 0; i < a.h.size(); ++i) {
    if (a.node(i) > z_max) break;
    best = std::max(best, abs(a.h[i] - b.h[i]));
  }
  return best;
}

PicardResult picard_forward(const GridFunction& h0, int iters) {
  h0.validate();
  if (iters < 0) throw ValidationError("iteration count must be non-negative");
  const Kernel ker(h0);
  const std::size_t m = ker.m;
  PicardResult res{h0, {}};
  std::vector<ExtReal> next(m + 1);
  for (int it = 0; it < iters; ++it) {
    const auto p = ker.prefix(res.h.h);
    for (std::size_t i = 0; i < m; ++i) next[i] = (ExtReal(0.5) - ker.at_square(p, i)) * ker.inv_gap[i];
    next[m] = (p[m] - ker.at_square(p, m - 1)) * static_cast<double>(m);
    check_finite(next, "picard_forward", it + 1);
    ExtReal d(0.0);
    for (std::size_t i = 0; i <= m; ++i) d = std::max(d, abs(next[i] - res.h.h[i]));
    res.changes.push_back(d);
    res.h.h.swap(next);
  }
  return res;
}

PicardResult picard_backward(const GridFunction& h0, int iters) {
  h0.validate();
  if (iters < 0) throw ValidationError("iteration count must be non-negative");
  const Kernel ker(h0);
  const std::size_t m = ker.m;
  PicardResult res{h0, {}};
  std::vector<ExtReal> next(m + 1);
  for (int it = 0; it < iters; ++it) {
    const auto p = ker.prefix(res.h.h);
    for (std::size_t i = 0; i < m; ++i) next[i] = (p[m] - ker.at_square(p, i)) * ker.inv_gap[i];
    next[m] = res.h.h[m];
    check_finite(next, "picard_backward", it + 1);
    ExtReal d(0.0);
    for (std::size_t i = 0; i <= m; ++i) d = std::max(d, abs(next[i] - res.h.h[i]));
    res.changes.push_back(d);
    res.h.h.swap(next);
  }
  return res;
}

GridFunction normalize_h0(const GridFunction& h) {
  if (h.h.front().is_zero()) throw DomainError("cannot normalize: H(0) = 0");
  GridFunction out = h;
  const ExtReal c = ExtReal(0.5) / h.h.front();
  for (auto& v : out.h) v = v * c;
  return out;
}

ExtReal h1_estimate(const GridFunction& h) {
  if (h.h.front().is_zero()) throw DomainError("H(0) = 0");
  return h.h.back() / (h.h.front() * 2.0);
}

ExtReal check_quarter_integral(const GridFunction& h) {
  h.validate();
  const std::size_t m = h.cells();
  // s = sqrt u: int du/(1+s) = 2s - 2 ln(1+s), int u du/(1+s) = 2(s^3/3 - s^2/2 + s - ln(1+s))
  auto i0 = [](const ExtReal& s) { return (s - log1p(s)) * 2.0; };
  auto i1 = [](const ExtReal& s) { return (s * s * s / 3.0 - s * s * 0.5 + s - log1p(s)) * 2.0; };
  ExtReal total(0.0);
  ExtReal sa(0.0), a0 = i0(sa), a1 = i1(sa);
  for (std::size_t j = 0; j < m; ++j) {
    const ExtReal ua = h.node(j);
    const ExtReal sb = sqrt(h.node(j + 1));
    const ExtReal b0 = i0(sb), b1 = i1(sb);
    const ExtReal d0 = b0 - a0, d1 = b1 - a1;
    const ExtReal slope = (h.h[j + 1] - h.h[j]) * static_cast<double>(m);
    total += h.h[j] * d0 + slope * (d1 - ua * d0);
    a0 = b0, a1 = b1;
  }
  return abs(total * 0.5 - 0.25);
}

PartsReport verify_parts_identity(const GridFunction& h, const ExtReal& eps) {
  h.validate();
  if (!(eps > ExtReal(0.0) && eps < ExtReal(0.5))) throw ValidationError("eps must lie in (0, 1/2)");
  const std::size_t m = h.cells();
  const double md = static_cast<double>(m);
  const ExtReal b = ExtReal(1.0) - eps;
  const ExtReal a = b * b;
  // On a piece [p, q] of one cell, H(z) = H(p) + s (z - p) and
  // int H/(1-z) = (H(p) + s(1-p)) ln((1-p)/(1-q)) - s (q - p).
  ExtReal lhs(0.0);
  ExtReal p = a;
  while (p < b) {
    auto k = static_cast<std::size_t>(floor(p * md).to_double());
    k = std::min(k, m - 1);
    ExtReal q = ExtReal(static_cast<double>(k + 1)) / md;
    if (q <= p) q = ExtReal(static_cast<double>(k + 2)) / md, ++k;
    if (q > b) q = b;
    const ExtReal s = (h.h[k + 1] - h.h[k]) * md;
    const ExtReal hp = h(p);
    const ExtReal one_p = ExtReal(1.0) - p;
    lhs += (hp + s * one_p) * log(one_p / (ExtReal(1.0) - q)) - s * (q - p);
    p = q;
  }
  PartsReport r;
  r.eps = eps;
  r.lhs = lhs;
  r.rhs = h(b) - h.h.front();
  r.difference = r.lhs - r.rhs;
  r.lhs_over_log = lhs / log(ExtReal(2.0) - eps);
  return r;
}

SeriesValue h_from_densities(const DensitySeq& seq, const ExtReal& z, double tol) {
  const std::size_t n = seq.size();
  if (n < 2) throw ValidationError("density table too short");
  if (!(abs(z) < ExtReal(1.0))) throw DomainError("h_from_densities needs |z| < 1");
  ExtReal c(0.0);
  for (std::size_t i = n / 2; i <= n; ++i)
    c = std::max(c, abs(seq.value(i)) / static_cast<double>(i + 1));
  c = c * 1.1;
  const ExtReal az = abs(z);
  const ExtReal bound = c * abs(ExtReal(1.0) - z) * pow(az, static_cast<long>(n)) / (ExtReal(1.0) - az);
  if (bound > ExtReal(tol)) {
    std::ostringstream os;
    os << "tail bound " << bound.to_double() << " at z = " << z.to_double() << " exceeds " << tol << " (N = " << n
       << ")";
    throw SolverError(os.str());
  }
  ExtReal s(0.0);
  for (std::size_t i = n; i >= 1; --i) s = s * z + seq.value(i) / static_cast<double>(i + 1);
  return {s * (ExtReal(1.0) - z), bound};
}

}  // namespace rgw
