#pragma once

// Characteristic equation chi(alpha) = int E_r^alpha dmu - int p_1 dmu,
// E_r = P_r'(1), its special forms, and zero finding.

#include <optional>
#include <string>
#include <vector>

#include "rgw/ext_complex.hpp"
#include "rgw/model.hpp"

namespace rgw {

enum class CharForm {
  kGeneral,  // int E^alpha dmu - int p_1 dmu
  kFQuad,    // (2-hi)^a - (2-lo)^a + m1 a, for a uniform quadratic block
  kTwoPoly,  // (2-a)^alpha + (2-b)^alpha - (a+b)
};

// Phi-exponent: phi_n ~ n^{-alpha-1}. F-exponent: alpha_F = alpha_Phi + 1.
enum class Convention { kPhi, kF };

std::string to_string(CharForm f);
std::string to_string(Convention c);

class CharEquation {
 public:
  static CharEquation general(const EnvMeasure& mu);
  // Requires a uniform quadratic block. For (1/2,1): 1 - (3/2)^a + (3/8) a.
  static CharEquation f_form(const EnvMeasure& mu);
  static CharEquation f_example1();
  static CharEquation f_example2();
  static CharEquation two_poly(const Rational& a, const Rational& b);

  CharForm form() const { return form_; }
  Convention convention() const { return form_ == CharForm::kFQuad ? Convention::kF : Convention::kPhi; }
  // The underlying measure (the two-atom measure for kTwoPoly).
  const EnvMeasure& measure() const { return mu_; }
  // General form for the same measure.
  CharEquation reference() const { return general(mu_); }
  std::string describe() const;

  ExtComplex eval(const ExtComplex& alpha) const;
  ExtComplex deriv(const ExtComplex& alpha) const;
  // Natural magnitude of the terms, used to make residual checks relative.
  ExtReal scale() const { return scale_; }

  // log(int p_1 / mass) / log(min E), shifted to this convention; empty when
  // min E = 1 (no finite bound of this type).
  std::optional<ExtReal> moment_lower_bound() const;

 private:
  struct AtomTerm {
    ExtReal w, e, log_e;
  };
  struct BlockTerm {
    ExtReal w, c1, e_lo, e_hi, log_lo, log_hi;
  };

  CharEquation() = default;
  ExtComplex general_value(const ExtComplex& alpha, bool derivative) const;

  CharForm form_ = CharForm::kGeneral;
  EnvMeasure mu_;
  Rational a_, b_;
  ExtReal scale_;
  ExtReal int_p1_;
  std::vector<AtomTerm> atoms_;
  std::vector<BlockTerm> blocks_;
  bool needs_quadrature_ = false;
  // kFQuad: (2-hi), (2-lo), m1 and their logs.
  ExtReal f_hi_, f_lo_, f_m1_, f_log_hi_, f_log_lo_;
  // kTwoPoly
  ExtReal t_a_, t_b_, t_log_a_, t_log_b_, t_sum_;
};

ExtComplex char_eval(const CharEquation& eq, const ExtComplex& alpha);

enum class RootClass { kPrimaryReal, kReal, kComplexPair, kSpurious };
std::string to_string(RootClass c);

struct CharRoot {
  ExtComplex alpha;
  ExtReal residual;  // |chi(alpha)|
  RootClass cls = RootClass::kPrimaryReal;
  Convention convention = Convention::kPhi;
};

// Search rectangle. im_min = 0 means the closed upper half: real zeros are
// included and each complex pair is reported once, with im > 0.
struct RootBox {
  ExtReal re_min, re_max, im_min, im_max;
  void validate() const;
};

// re in [primary - 0.5, primary + 6], im in [0, 40].
RootBox default_root_box(const ExtReal& primary);

// Lowest real zero: a downward scan from 1 to scan_min with step 1/16,
// bisection, then Newton. Residual <= 1e-25 * scale.
// Throws SolverError with the scan trace when no sign change is seen.
CharRoot find_real_primary(const CharEquation& eq, double scan_min = -64.0);

// Argument-principle subdivision: the box is cut into cells whose winding
// numbers are tracked on their edges until each holds one zero, which is
// polished by Newton to residual <= tol * scale. Throws SolverError when a
// cell's count and its polished zeros disagree, or when a zero lies below
// the primary real zero.
std::vector<CharRoot> find_roots_in_box(const CharEquation& eq, RootBox box, double tol = 1e-20,
                                        std::size_t threads = 0);

// Re-evaluates each root in the general form of the same measure (shifting
// F-exponents by -1) and flags those that are not zeros there.
std::vector<CharRoot> filter_spurious(std::vector<CharRoot> roots, const CharEquation& reference_eq,
                                      double tol = 1e-12);

}  // namespace rgw
