#include <cmath>

#include "doctest.h"
#include "rgw/charroots.hpp"

using namespace rgw;

namespace {

ExtComplex C(double re, double im) { return {ExtReal(re), ExtReal(im)}; }
double dabs(const ExtComplex& z) { return abs(z).to_double(); }

// Explicit zeros of the (7/16, 3/4) equation: x^2 + x - 19/16 = 0, x = (5/4)^alpha.
ExtReal explicit_root_7_16() {
  const ExtReal x = (sqrt(ExtReal(23.0) / 4.0) - 1.0) * 0.5;
  return log(x) / log(ExtReal(1.25));
}

}  // namespace

TEST_CASE("characteristic function values") {
  const auto f2 = CharEquation::f_example2();
  CHECK(f2.eval(ExtComplex(-1.0)) == ExtComplex(0.0));
  CHECK(f2.eval(ExtComplex(0.0)) == ExtComplex(0.0));
  CHECK(f2.convention() == Convention::kF);

  const auto g2 = CharEquation::general(example_measure("2"));
  CHECK(g2.convention() == Convention::kPhi);
  CHECK(dabs(g2.eval(ExtComplex(-2.0))) < 1e-31);

  const auto t = CharEquation::two_poly(Rational(7, 16), Rational(3, 4));
  CHECK(dabs(t.eval(explicit_root_7_16())) < 1e-30);

  // F(a) = -a chi(a - 1) for the uniform block.
  const auto f1 = CharEquation::f_example1();
  const auto g1 = CharEquation::general(example_measure("1"));
  for (const auto& a : {C(0.3, 0.0), C(-2.5, 7.0), C(1.7, -0.2), C(0.05, 0.1)}) {
    const ExtComplex lhs = f1.eval(a);
    const ExtComplex rhs = -(a * g1.eval(a - ExtComplex(1.0)));
    CHECK(dabs(lhs - rhs) < 1e-29 * std::max(1.0, dabs(lhs)));
  }
  // Two-poly closed form against the general form on the two-atom measure.
  const auto g3 = CharEquation::general(example_measure("3a"));
  for (const auto& a : {C(-1.2, 0.0), C(2.0, 13.0)}) CHECK(dabs(g3.eval(a) - t.eval(a)) < 1e-29);
}

TEST_CASE("general form against quadrature") {
  const EnvMeasure mu = EnvMeasure::quad_uniform(Rational(1, 5), Rational(9, 10));
  const auto g = CharEquation::general(mu);
  const ExtReal p1 = integrate_p1(mu).to_ext();
  // The block series covers |alpha + 1| < 1/2; probe both sides of the switch.
  for (const auto& a : {C(-1.0, 0.0), C(-0.51, 0.0), C(-0.49, 0.0), C(-1.0, 0.4999), C(-1.0, 0.5001),
                        C(2.3, -4.0), C(-3.0, 11.0), C(-1.0 + 1e-9, 0.0)}) {
    const auto q = measure_integrate(mu, [&](const std::vector<ExtReal>& p) {
      return cpow(p[0] + p[1] * 2.0, a);
    });
    const ExtComplex want = q.value - ExtComplex(p1);
    CHECK(dabs(g.eval(a) - want) < 1e-24);
    const auto qd = measure_integrate(mu, [&](const std::vector<ExtReal>& p) {
      const ExtReal e = p[0] + p[1] * 2.0;
      return cpow(e, a) * log(e);
    });
    CHECK(dabs(g.deriv(a) - qd.value) < 1e-24);
  }
}

TEST_CASE("conjugate symmetry is exact") {
  const std::vector<CharEquation> eqs{CharEquation::general(example_measure("1")), CharEquation::f_example1(),
                                      CharEquation::two_poly(Rational(1, 2), Rational(3, 4)),
                                      CharEquation::general(example_measure("0"))};
  for (const auto& eq : eqs)
    for (const auto& a : {C(-0.8, 0.3), C(2.5, 10.7), C(-5.0, 33.0)}) CHECK(eq.eval(conj(a)) == conj(eq.eval(a)));
}

TEST_CASE("analytic derivative") {
  const std::vector<CharEquation> eqs{CharEquation::general(example_measure("2")), CharEquation::f_example2(),
                                      CharEquation::two_poly(Rational(7, 16), Rational(3, 4)),
                                      CharEquation::general(EnvMeasure::two_poly(Rational(1, 3), Rational(1, 3)))};
  const ExtReal h(1e-9);
  for (const auto& eq : eqs)
    for (const auto& a : {C(-1.1, 0.2), C(3.0, -9.0)}) {
      const ExtComplex fd = (eq.eval(a + ExtComplex(h)) - eq.eval(a - ExtComplex(h))) / (h * 2.0);
      CHECK(dabs(fd - eq.deriv(a)) < 1e-12 * std::max(1.0, dabs(fd)));
    }
}

TEST_CASE("primary real zero") {
  const auto r1 = find_real_primary(CharEquation::f_example1());
  // 40-digit solve by an independent tool.
  CHECK(abs(r1.alpha.re() - parse_ext_real("-0.3904295156631819323356801232143649660287")).to_double() < 1e-28);
  CHECK(std::abs(r1.alpha.re().to_double() - -0.3904295156631794) < 5e-15);
  CHECK(r1.cls == RootClass::kPrimaryReal);
  CHECK(r1.residual.to_double() <= 1e-25);
  const auto r2 = find_real_primary(CharEquation::f_example2());
  CHECK(r2.alpha == ExtComplex(-1.0));
  const auto r3 = find_real_primary(CharEquation::two_poly(Rational(1, 2), Rational(3, 4)));
  CHECK(std::abs(r3.alpha.re().to_double() - -1.526066812384411) < 1e-14);
  CHECK(abs(r3.alpha.re() - parse_ext_real("-1.526066812384411641771819513706140326286")).to_double() < 1e-28);
  const auto r4 = find_real_primary(CharEquation::two_poly(Rational(7, 16), Rational(3, 4)));
  CHECK(abs(r4.alpha.re() - explicit_root_7_16()).to_double() < 1e-28);

  // F-exponent minus Phi-exponent is exactly one.
  for (const char* name : {"1", "2"}) {
    const auto f = find_real_primary(CharEquation::f_form(example_measure(name)));
    const auto g = find_real_primary(CharEquation::general(example_measure(name)));
    CHECK(abs(f.alpha.re() - g.alpha.re() - 1.0).to_double() < 1e-20);
  }
  // Scaling the measure leaves the zero alone.
  const auto s = find_real_primary(CharEquation::general(example_measure("1").scaled(Rational(5))));
  const auto u = find_real_primary(CharEquation::general(example_measure("1")));
  CHECK(abs(s.alpha.re() - u.alpha.re()).to_double() < 1e-28);

  const EnvMeasure lf = EnvMeasure::finite({Atom{Rational(1), GenFunc::linear_fractional(Rational(1, 2), 4)}});
  CHECK_THROWS_AS(find_real_primary(CharEquation::general(lf), 0.9), SolverError);
}

TEST_CASE("moment bound sits below the primary zero") {
  const auto t = CharEquation::two_poly(Rational(1, 2), Rational(3, 4));
  const auto bound = t.moment_lower_bound();
  REQUIRE(bound.has_value());
  CHECK(*bound < find_real_primary(t).alpha.re());
  CHECK_FALSE(CharEquation::general(example_measure("1")).moment_lower_bound().has_value());
}

TEST_CASE("zeros in a box") {
  const auto f2 = CharEquation::f_example2();
  const auto roots = find_roots_in_box(f2, {ExtReal(2.0), ExtReal(3.0), ExtReal(9.0), ExtReal(12.0)});
  REQUIRE(roots.size() == 1);
  CHECK(std::abs(roots[0].alpha.re().to_double() - 2.545364930374021) < 1e-14);
  CHECK(abs(roots[0].alpha - ExtComplex(parse_ext_real("2.545364930374021172514175145541234963128"),
                                        parse_ext_real("10.75397517526887611017346351548282307477")))
            .to_double() < 1e-27);
  CHECK(std::abs(roots[0].alpha.im().to_double() - 10.75397517526887) < 1e-13);
  CHECK(roots[0].cls == RootClass::kComplexPair);
  CHECK(roots[0].residual.to_double() <= 1e-20);
  CHECK(dabs(f2.eval(conj(roots[0].alpha))) <= 1e-20);

  // Single polynomial z/2 + z^2/2: alpha = (ln(1/2) + 2 pi i k) / ln(3/2).
  const EnvMeasure single = EnvMeasure::finite({Atom{Rational(1), GenFunc({Rational(1, 2), Rational(1, 2)})}});
  const auto sr = find_roots_in_box(CharEquation::general(single), {ExtReal(-2.5), ExtReal(0.0), ExtReal(0.0),
                                                                     ExtReal(40.0)});
  REQUIRE(sr.size() == 3);
  const ExtReal l32 = log(ExtReal(1.5));
  for (std::size_t k = 0; k < 3; ++k) {
    const ExtComplex want(log(ExtReal(0.5)) / l32, constants::two_pi() * static_cast<double>(k) / l32);
    CHECK(dabs(sr[k].alpha - want) < 1e-25);
  }
  CHECK(sr[0].cls == RootClass::kPrimaryReal);
  CHECK(sr[0].alpha.im().is_zero());

  // (7/16, 3/4): two vertical lines from x = (-1 +- sqrt(23/4)) / 2.
  const auto t = CharEquation::two_poly(Rational(7, 16), Rational(3, 4));
  const auto tr = find_roots_in_box(t, {ExtReal(-10.0), ExtReal(5.0), ExtReal(0.0), ExtReal(30.0)});
  REQUIRE(tr.size() == 3);
  const ExtReal l54 = log(ExtReal(1.25));
  const ExtReal xm = (sqrt(ExtReal(23.0) / 4.0) + 1.0) * 0.5;  // |negative branch|
  CHECK(abs(tr[0].alpha.re() - explicit_root_7_16()).to_double() < 1e-25);
  CHECK(tr[0].alpha.im().is_zero());
  CHECK(abs(tr[1].alpha - ExtComplex(explicit_root_7_16(), constants::two_pi() / l54)).to_double() < 1e-25);
  CHECK(abs(tr[2].alpha - ExtComplex(log(xm) / l54, constants::pi() / l54)).to_double() < 1e-25);
}

TEST_CASE("default box and spurious filtering") {
  for (const char* name : {"1", "2"}) {
    const auto f = CharEquation::f_form(example_measure(name));
    const auto p = find_real_primary(f);
    auto roots = find_roots_in_box(f, default_root_box(p.alpha.re()));
    REQUIRE(roots.size() >= 3);
    for (const auto& r : roots) {
      CHECK(r.alpha.re() >= p.alpha.re() - 1e-12);
      CHECK(dabs(f.eval(conj(r.alpha))) <= 1e-20);
    }
    roots = filter_spurious(roots, f.reference());
    int spurious = 0;
    for (const auto& r : roots) {
      if (r.cls == RootClass::kSpurious) {
        ++spurious;
        CHECK(dabs(r.alpha) < 1e-25);
      }
    }
    CHECK(spurious == 1);
    CHECK(roots.front().cls == RootClass::kPrimaryReal);
  }
  const auto general = find_roots_in_box(CharEquation::general(example_measure("2")),
                                         {ExtReal(1.0), ExtReal(2.0), ExtReal(9.0), ExtReal(12.0)});
  REQUIRE(general.size() == 1);
  CHECK(std::abs(general[0].alpha.re().to_double() - 1.545364930374021) < 1e-14);
  CHECK_THROWS_AS(filter_spurious({}, CharEquation::f_example1()), ValidationError);
  CHECK_THROWS_AS((RootBox{ExtReal(1.0), ExtReal(0.0), ExtReal(0.0), ExtReal(1.0)}.validate()), ValidationError);
}
