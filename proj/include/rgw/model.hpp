#pragma once

// Offspring generating functions P_r and environment measures mu.
//
// A measure is a list of components. Each component carries a weight and
// the coefficients p_1..p_d of P_r as polynomials in the environment
// parameter r, together with how r is drawn: a point mass (finite atoms,
// where the polynomials are constants) or the uniform density on [lo, hi].
// Any integrand that is polynomial in the coefficients therefore integrates
// exactly; everything else goes through Gauss-Legendre quadrature.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "rgw/error.hpp"
#include "rgw/ext_complex.hpp"
#include "rgw/rational.hpp"

namespace rgw {

inline constexpr std::size_t kDefaultMaxDegree = 64;

// Dense polynomial in r with rational coefficients, c[i] multiplies r^i.
class RPoly {
 public:
  RPoly() = default;
  RPoly(Rational c) : c_{std::move(c)} { trim(); }  // NOLINT(google-explicit-constructor)
  explicit RPoly(std::vector<Rational> c) : c_(std::move(c)) { trim(); }
  static RPoly r() { return RPoly(std::vector<Rational>{Rational(0), Rational(1)}); }

  const std::vector<Rational>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  // -1 for the zero polynomial.
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  Rational constant() const { return c_.empty() ? Rational(0) : c_[0]; }

  Rational eval(const Rational& x) const;
  ExtReal eval(const ExtReal& x) const;
  // Exact integral over [lo, hi].
  Rational integrate(const Rational& lo, const Rational& hi) const;

  friend RPoly operator+(const RPoly& a, const RPoly& b);
  friend RPoly operator-(const RPoly& a, const RPoly& b);
  friend RPoly operator*(const RPoly& a, const RPoly& b);
  friend RPoly operator*(const RPoly& a, const Rational& s);
  RPoly& operator+=(const RPoly& b) { return *this = *this + b; }
  RPoly& operator*=(const RPoly& b) { return *this = *this * b; }
  friend bool operator==(const RPoly& a, const RPoly& b) { return a.c_ == b.c_; }

 private:
  void trim();
  std::vector<Rational> c_;
};

// P(z) = sum_{j>=1} p_j z^j with p_0 = 0.
class GenFunc {
 public:
  // coeffs lists p_1..p_d. Throws ValidationError unless all p_j >= 0,
  // sum p_j = 1 exactly and d <= d_max.
  explicit GenFunc(std::vector<Rational> coeffs, std::size_t d_max = kDefaultMaxDegree);

  // r z + (1-r) z^2.
  static GenFunc quadratic(const Rational& r);
  // (1-r) z / (1 - r z) truncated at degree d; the tail mass r^(d-1) goes to z^d.
  static GenFunc linear_fractional(const Rational& r, std::size_t d = kDefaultMaxDegree);

  std::size_t degree() const { return p_.size(); }
  const std::vector<Rational>& coeffs() const { return p_; }
  // p_j, zero outside 1..d.
  Rational p(std::size_t j) const { return j >= 1 && j <= p_.size() ? p_[j - 1] : Rational(0); }

 private:
  std::vector<Rational> p_;
};

ExtComplex pgf_eval(const GenFunc& P, const ExtComplex& z);
Rational pgf_eval(const GenFunc& P, const Rational& z);
// E = P'(1).
Rational pgf_mean(const GenFunc& P);

struct Atom {
  Rational weight;
  GenFunc pgf;
};

struct MeasureComponent {
  enum class Kind { kPoint, kUniform };
  Kind kind = Kind::kPoint;
  Rational weight;             // point mass, or density of the uniform law
  Rational lo, hi;             // support of r for kUniform
  std::vector<RPoly> coeffs;   // p_1..p_d as polynomials in r

  // Exact integral of a polynomial in r against this component.
  Rational integrate(const RPoly& f) const;
};

class EnvMeasure {
 public:
  // Weights must be positive.
  static EnvMeasure finite(std::vector<Atom> atoms);
  // P_r(z) = r z + (1-r) z^2, r uniform on (lo, hi) with the given density;
  // requires 0 <= lo < hi <= 1.
  static EnvMeasure quad_uniform(const Rational& lo, const Rational& hi,
                                 const Rational& density = Rational(1));
  // Two equally weighted quadratic atoms a, b.
  static EnvMeasure two_poly(const Rational& a, const Rational& b);

  bool is_quad_uniform() const { return quad_; }
  bool is_finite() const { return !quad_; }
  // Valid only for is_quad_uniform().
  const Rational& lo() const { return components_.front().lo; }
  const Rational& hi() const { return components_.front().hi; }
  const Rational& density() const { return components_.front().weight; }

  const std::vector<MeasureComponent>& components() const { return components_; }
  // Atom list for finite measures (empty otherwise).
  const std::vector<Atom>& atoms() const { return atoms_; }

  std::size_t max_degree() const;
  Rational mass() const;
  EnvMeasure scaled(const Rational& c) const;
  std::string describe() const;

 private:
  bool quad_ = false;
  std::vector<MeasureComponent> components_;
  std::vector<Atom> atoms_;
};

// Integrand built from the PGF coefficients p_1..p_d, each a polynomial in r.
using PolyIntegrand = std::function<RPoly(const std::vector<RPoly>& coeffs)>;
// Integrand evaluated at concrete coefficient values.
using RealIntegrand = std::function<ExtReal(const std::vector<ExtReal>& coeffs)>;
using ComplexIntegrand = std::function<ExtComplex(const std::vector<ExtReal>& coeffs)>;

// Exact integral of a polynomial integrand.
Rational measure_integrate(const EnvMeasure& mu, const PolyIntegrand& f);
// Common exact moments.
Rational integrate_p1(const EnvMeasure& mu);
Rational integrate_p1_pow(const EnvMeasure& mu, unsigned long k);

struct QuadResult {
  ExtReal value;
  ExtReal error;  // estimate from the last panel doubling
};
struct ComplexQuadResult {
  ExtComplex value;
  ExtReal error;
};

// Atoms are summed directly. Uniform components use 64-node Gauss-Legendre
// panels, doubling the panel count until the relative change is below
// rel_tol. Throws SolverError with the achieved estimate otherwise.
QuadResult measure_integrate(const EnvMeasure& mu, const RealIntegrand& f, double rel_tol = 1e-25);
ComplexQuadResult measure_integrate(const EnvMeasure& mu, const ComplexIntegrand& f,
                                    double rel_tol = 1e-25);

// 64-point Gauss-Legendre rule on [-1, 1] in double-double.
struct GaussRule {
  std::vector<ExtReal> nodes;
  std::vector<ExtReal> weights;
};
const GaussRule& gauss_legendre_64();

struct MeasureReport {
  bool ok = false;
  bool p1_positive = false;          // int p_1 dmu > 0
  bool ratio_below_one = false;      // int p_1^2 dmu / int p_1 dmu < 1
  Rational int_p1;
  Rational int_p1_sq;
  std::string message;
};

MeasureReport validate_measure(const EnvMeasure& mu);
// Throws ValidationError carrying the report message.
void require_admissible(const EnvMeasure& mu);

// Named measures used throughout: "0", "1", "2", "3a", "3b", "emu1".
EnvMeasure example_measure(const std::string& name);
// The single-polynomial parameter that reproduces the (1/2,1) exponent.
Rational emulation_parameter();

// Measure-spec JSON: {"type":"finite","atoms":[{"weight":..,"coeffs":[..]}]}
// or {"type":"quad-uniform","lo":..,"hi":..[,"density":..]}. Numbers and
// strings ("7/16", "0.4375") are read exactly.
EnvMeasure parse_measure_json(const std::string& text);
EnvMeasure load_measure_file(const std::string& path);
std::string measure_to_json(const EnvMeasure& mu);

}  // namespace rgw
