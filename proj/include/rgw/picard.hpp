#pragma once

// Picard iteration for H(z) = (1-z)F(z)/z^2 of the uniform (r, 1-r) family.
//
//   forward:  H(z) = 1/(2(1-z)) - 2/(1-z) int_0^z  t/(1+t) H(t^2) dt
//   backward: H(z) = 1/(1-z)          int_z^1 2t/(1+t) H(t^2) dt
//
// Both integrals are taken in u = t^2, where the integrand is H(u)/(1+sqrt u).

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "rgw/density_seq.hpp"
#include "rgw/ext_real.hpp"

namespace rgw {

// kRectangle: midpoint rectangles in u, H at the midpoint by linear
// interpolation. kTrapezoid: trapezoids in u. Both are first order here,
// the kink of H(t^2) interpolation dominates.
enum class QuadRule { kRectangle, kTrapezoid };

std::string to_string(QuadRule q);
QuadRule parse_quad_rule(const std::string& s);

// Samples H(i dz), i = 0..cells, dz = 1/cells. Linear between nodes.
struct GridFunction {
  std::vector<ExtReal> h;
  ExtReal step;
  QuadRule rule = QuadRule::kRectangle;

  static GridFunction sample(std::size_t cells, const std::function<ExtReal(const ExtReal&)>& f,
                             QuadRule rule = QuadRule::kRectangle);

  std::size_t cells() const { return h.size() - 1; }
  ExtReal node(std::size_t i) const;
  ExtReal operator()(const ExtReal& z) const;
  void validate() const;
};

// Cells for a requested step; throws unless 1/step is (close to) an integer.
std::size_t cells_for_step(double step);

// H0 = c, and H0 = 0 on [0, 1/2], 2 - z on (1/2, 1].
GridFunction h0_const(std::size_t cells, const ExtReal& c = ExtReal(1.0), QuadRule rule = QuadRule::kRectangle);
GridFunction h0_step(std::size_t cells, QuadRule rule = QuadRule::kRectangle);

struct PicardResult {
  GridFunction h;
  std::vector<ExtReal> changes;  // sup |H_{k+1} - H_k| per iteration
  ExtReal last_change() const { return changes.empty() ? ExtReal(0.0) : changes.back(); }
};

// The z = 1 node of the forward form is the backward average over the last
// cell, taken with the previous iterate.
PicardResult picard_forward(const GridFunction& h0, int iters);
// H(1) is invariant; H0(1) = 1 gives H(0) -> 1 - ln 2.
PicardResult picard_backward(const GridFunction& h0, int iters);

// Sup of |H_{k+1} - H_k| restricted to nodes with z <= z_max.
ExtReal sup_change(const GridFunction& a, const GridFunction& b, const ExtReal& z_max = ExtReal(1.0));

// c H with H(0) = 1/2.
GridFunction normalize_h0(const GridFunction& h);
// H(1) under that normalization: H(1) / (2 H(0)).
ExtReal h1_estimate(const GridFunction& h);

// |int_0^1 t/(1+t) H(t^2) dt - 1/4|, integrating the piecewise linear H
// exactly against 1/(1+sqrt u). Pass a normalized H.
ExtReal check_quarter_integral(const GridFunction& h);

struct PartsReport {
  ExtReal eps;
  ExtReal lhs;  // int_{(1-eps)^2}^{1-eps} H(z)/(1-z) dz
  ExtReal rhs;  // H(1-eps) - H(0)
  ExtReal difference;
  ExtReal lhs_over_log;  // lhs / ln(2 - eps), tends to H(1)
};
PartsReport verify_parts_identity(const GridFunction& h, const ExtReal& eps);

// H(z) = (1-z) sum phi_n z^{n-1}/(n+1) from a density table. The tail past N
// is bounded by c z^N with c = 1.1 max_{n >= N/2} phi_n/(n+1).
struct SeriesValue {
  ExtReal value;
  ExtReal tail_bound;
};
SeriesValue h_from_densities(const DensitySeq& seq, const ExtReal& z, double tol = 1e-12);

}  // namespace rgw
