#include "doctest.h"
#include "rgw/model.hpp"

using namespace rgw;

TEST_CASE("pgf evaluation and mean") {
  const GenFunc id({Rational(1)});
  CHECK(pgf_eval(id, ExtComplex(0.5)) == ExtComplex(0.5));
  CHECK(pgf_eval(GenFunc::quadratic(Rational(3, 4)), Rational(1)) == Rational(1));
  CHECK(pgf_eval(GenFunc::quadratic(Rational(1, 2)), Rational(1, 2)) == Rational(3, 8));
  CHECK(pgf_mean(GenFunc::quadratic(Rational(3, 4))) == Rational(5, 4));
  CHECK(pgf_mean(id) == Rational(1));
  CHECK(pgf_mean(GenFunc({Rational(0), Rational(1)})) == Rational(2));
}

TEST_CASE("pgf is monotone and below the diagonal on [0,1]") {
  for (const auto& P : {GenFunc::quadratic(Rational(1, 3)), GenFunc::linear_fractional(Rational(1, 2), 20),
                        GenFunc({Rational(1, 5), Rational(1, 5), Rational(3, 5)})}) {
    Rational prev(0);
    for (int i = 0; i <= 16; ++i) {
      const Rational x(i, 16);
      const Rational y = pgf_eval(P, x);
      CHECK(y.sign() >= 0);
      CHECK(y <= x);
      CHECK(y >= prev);
      prev = y;
    }
  }
}

TEST_CASE("generating function validation") {
  CHECK_THROWS_AS(GenFunc({Rational(1, 2), Rational(1, 4)}), ValidationError);
  CHECK_THROWS_AS(GenFunc({Rational(3, 2), Rational(-1, 2)}), ValidationError);
  CHECK_THROWS_AS(GenFunc(std::vector<Rational>(65, Rational(1, 65))), ValidationError);
  const GenFunc lf = GenFunc::linear_fractional(Rational(1, 3), 10);
  CHECK(lf.degree() == 10);
  CHECK(lf.p(1) == Rational(2, 3));
  CHECK(lf.p(3) == Rational(2, 27));
}

TEST_CASE("exact measure integrals") {
  const auto r_moment = [](const std::vector<RPoly>& c) { return c[0]; };
  CHECK(measure_integrate(EnvMeasure::quad_uniform(Rational(1, 2), Rational(1)), r_moment) == Rational(3, 8));
  CHECK(measure_integrate(EnvMeasure::quad_uniform(Rational(0), Rational(1)), r_moment) == Rational(1, 2));
  // Oracle: direct rational sum a + b.
  CHECK(measure_integrate(EnvMeasure::two_poly(Rational(7, 16), Rational(3, 4)), r_moment) ==
        Rational(7, 16) + Rational(3, 4));
  CHECK(integrate_p1_pow(example_measure("1"), 2) == Rational(7, 24));
  CHECK(integrate_p1_pow(example_measure("3a"), 3) == pow(Rational(7, 16), 3) + pow(Rational(3, 4), 3));
}

TEST_CASE("quadrature matches closed forms") {
  const EnvMeasure mu = example_measure("1");
  // int_{1/2}^1 (2-r)^(-1/2) dr = 2 (sqrt(3/2) - 1).
  const auto q = measure_integrate(mu, RealIntegrand([](const std::vector<ExtReal>& c) {
                                     return ExtReal(1.0) / sqrt(ExtReal(2.0) - c[0]);
                                   }));
  const ExtReal want = (sqrt(ExtReal(1.5)) - 1.0) * 2.0;
  CHECK(abs(q.value - want).to_double() < 1e-28);
  const auto atoms = measure_integrate(example_measure("3a"), RealIntegrand([](const std::vector<ExtReal>& c) {
                                         return c[0] * c[1];
                                       }));
  CHECK(atoms.value == (Rational(7, 16) * Rational(9, 16) + Rational(3, 16)).to_ext());
  double wsum = 0;
  for (const auto& w : gauss_legendre_64().weights) wsum += w.to_double();
  CHECK(std::abs(wsum - 2.0) < 1e-15);
}

TEST_CASE("admissibility report") {
  const auto r1 = validate_measure(example_measure("1"));
  CHECK(r1.ok);
  CHECK(r1.int_p1_sq / r1.int_p1 == Rational(7, 9));
  const auto id = validate_measure(EnvMeasure::finite({Atom{Rational(1), GenFunc({Rational(1)})}}));
  CHECK_FALSE(id.ok);
  CHECK(id.p1_positive);
  CHECK_FALSE(id.ratio_below_one);
  const auto z2 = validate_measure(EnvMeasure::finite({Atom{Rational(1), GenFunc({Rational(0), Rational(1)})}}));
  CHECK_FALSE(z2.ok);
  CHECK_FALSE(z2.p1_positive);
  CHECK_THROWS_AS(require_admissible(EnvMeasure::finite({Atom{Rational(1), GenFunc({Rational(1)})}})),
                  ValidationError);
  for (const char* name : {"0", "1", "2", "3a", "3b", "emu1"}) CHECK(validate_measure(example_measure(name)).ok);
}

TEST_CASE("measure construction rejects bad input") {
  CHECK_THROWS_AS(EnvMeasure::quad_uniform(Rational(1, 2), Rational(1, 2)), ValidationError);
  CHECK_THROWS_AS(EnvMeasure::quad_uniform(Rational(-1, 2), Rational(1)), ValidationError);
  CHECK_THROWS_AS(EnvMeasure::finite({Atom{Rational(0), GenFunc({Rational(1)})}}), ValidationError);
  CHECK_THROWS_AS(example_measure("9"), ValidationError);
}

TEST_CASE("measure JSON is read exactly") {
  const EnvMeasure m = parse_measure_json(
      R"({"type":"finite","atoms":[{"weight":1.0,"coeffs":[0.4375,0.5625]},{"weight":1.0,"coeffs":["3/4","1/4"]}]})");
  CHECK(m.atoms().size() == 2);
  CHECK(m.atoms()[0].pgf.p(1) == Rational(7, 16));
  CHECK(m.atoms()[1].pgf.p(2) == Rational(1, 4));
  const EnvMeasure q = parse_measure_json(R"({"type":"quad-uniform","lo":0.5,"hi":1.0})");
  CHECK(q.is_quad_uniform());
  CHECK(q.lo() == Rational(1, 2));
  const EnvMeasure back = parse_measure_json(measure_to_json(m.scaled(Rational(1, 3))));
  CHECK(back.mass() == Rational(2, 3));
  CHECK_THROWS_AS(parse_measure_json(R"({"type":"finite","atoms":[{"coeffs":[0.5,0.4]}]})"), ValidationError);
  CHECK_THROWS_AS(parse_measure_json(R"({"type":"quad-uniform","lo":0.5})"), ValidationError);
  CHECK_THROWS_AS(parse_measure_json("{not json"), ValidationError);
  const EnvMeasure e = parse_measure_json(R"({"type":"finite","atoms":[{"coeffs":[0.1,0.9]}]})");
  CHECK(e.atoms()[0].pgf.p(1) == Rational(1, 10));
}

TEST_CASE("scaling keeps admissibility ratios") {
  for (const char* name : {"1", "2", "3a"}) {
    const EnvMeasure m = example_measure(name);
    const EnvMeasure s = m.scaled(Rational(1, 2));
    CHECK(s.mass() == m.mass() / Rational(2));
    const auto a = validate_measure(m), b = validate_measure(s);
    CHECK(a.int_p1_sq / a.int_p1 == b.int_p1_sq / b.int_p1);
  }
}
