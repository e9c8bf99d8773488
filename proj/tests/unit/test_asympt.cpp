#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>

#include "doctest.h"
#include "rgw/asympt.hpp"
#include "rgw/recur.hpp"

using namespace rgw;
using big = boost::multiprecision::cpp_bin_float_50;

namespace {

double dabs(const ExtComplex& z) { return abs(z).to_double(); }
double rel(const ExtReal& a, const ExtReal& b) { return abs((a - b) / b).to_double(); }

}  // namespace

TEST_CASE("generalized binomial asymptotics") {
  const ExtComplex h(-0.5);
  const ExtComplex e4 = binom_exact(h, 10000);
  CHECK(dabs((binom_asympt(h, 10000, 1) - e4) / e4) <= 1e-3);
  const ExtComplex e2 = binom_exact(h, 100);
  const double err1 = dabs((binom_asympt(h, 100, 1) - e2) / e2);
  const double err2 = dabs((binom_asympt(h, 100, 2) - e2) / e2);
  CHECK(err2 * 10 <= err1);
  // binom(-2, n) = (-1)^n (n+1)
  CHECK(binom_exact(ExtComplex(-2.0), 7) == ExtComplex(-8.0));
  const ExtComplex lead = binom_asympt(ExtComplex(-2.0), 100000, 1);
  CHECK(std::abs((lead.re() / 100001.0).to_double() - 1.0) < 1e-4);
  CHECK_THROWS_AS(binom_asympt(ExtComplex(3.0), 10), DomainError);
  // Complex exponent: odd signs and conjugate pairing.
  const ExtComplex a(ExtReal(0.3), ExtReal(2.0));
  const ExtComplex ex = binom_exact(a, 3000);
  CHECK(dabs((binom_asympt(a, 3000, 2) - ex) / ex) < 1e-6);
}

TEST_CASE("model evaluation is real and ordered") {
  AsymptoticModel m;
  const ExtComplex a(ExtReal(1.5), ExtReal(4.0));
  const ExtComplex c(ExtReal(0.25), ExtReal(-0.5));
  m.add_power(a, 0, c);
  m.add_power(ExtReal(-1.0), 0, ExtReal(2.0));
  m.add_power(ExtReal(-1.0), 1, ExtReal(1.0));
  REQUIRE(m.power_terms().size() == 3);
  CHECK(m.power_terms()[0].alpha == ExtComplex(-1.0));
  CHECK(m.power_terms()[0].j == 0);
  CHECK(m.power_terms()[2].paired);
  const ExtReal n(37.0);
  const ExtComplex v = c * cpow(n, -a) + conj(c) * cpow(n, -conj(a));
  CHECK(dabs(v - ExtComplex(m.eval(37) - n * 2.0 - 1.0)) < 1e-30);
  CHECK_THROWS_AS(m.add_periodic(3, 1, {ExtReal(1.0)}), ValidationError);
}

TEST_CASE("example 1 model") {
  const ExtReal a = example1_alpha();
  const big ab("-0.3904295156631819323356801232143649660287");
  const big want = -ab * (3 * ab * ab + 11 * ab + 2) / (2 * (6 + 9 * ab));
  const ExtReal got = example1_second_coefficient(a);
  CHECK(std::abs(static_cast<double>((big(got.hi()) + big(got.lo()) - want) / want)) < 1e-20);

  const auto seq = densities_example1(20000, {Mode::kXFloat});
  const auto fit = fit_leading_constant(seq, -a);
  CHECK(std::abs(fit.estimate.to_double() - 1.223219951386792) < 1e-9);
  CHECK(fit.converged);
  const auto model = model_example1(fit.estimate);
  double prev = 1;
  for (std::size_t n : {100, 1000, 10000}) {
    const double e = rel(model.eval(n), seq.value(n));
    CHECK(e < prev);
    CHECK(e * static_cast<double>(n) * n < 1e-2);  // next order n^{-2} relative
    prev = e;
  }
}

TEST_CASE("emulating polynomial reproduces the exponent") {
  const Rational p = emulation_parameter();
  const auto r = find_real_primary(CharEquation::two_poly(p, p));
  CHECK(std::abs(r.alpha.re().to_double() - -1.3904295156631794) < 1e-12);
  CHECK(std::abs((r.alpha.re() - (example1_alpha() - 1.0)).to_double()) < 1e-14);
}

TEST_CASE("example 2 models") {
  const ExtReal l = constants::ln2();
  const ExtReal A = example2_a();
  CHECK(std::abs(A.to_double() - 1.6294456766354648) < 1e-15);
  const ExtReal B = A / (l * 4.0 - 2.0);
  CHECK(rel(model_example2(1).eval(1), A * 2.0 - B - A * 0.5) < 1e-30);
  const auto rho = example2_rho();
  CHECK(rho[3] == rho[7]);
  CHECK(rho[0] == rho[4]);
  CHECK(rel(rho[3], (l - 5.0) / (l * 4.0 - 2.0)) < 1e-31);
  ExtReal sum(0.0);
  for (const auto& r : rho) sum += r;
  CHECK(std::abs(sum.to_double()) < 1e-29);
  CHECK_THROWS_AS(model_example2(4), DomainError);

  const auto seq = densities_example2(100000, {Mode::kXFloat});
  // Level 1 leaves O(1/n), level 2 O(1/n^2); slope of log|residual| for n = 5 mod 8.
  const auto m1 = model_example2(1), m2 = model_example2(2);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (std::size_t n = 1005; n <= 99997; n = n * 21 / 20 - (n * 21 / 20) % 8 + 5) {
    const double x = std::log(static_cast<double>(n));
    const double y = std::log(std::abs((seq.value(n) - m2.eval(n)).to_double()));
    sx += x, sy += y, sxx += x * x, sxy += x * y, ++cnt;
    CHECK(std::abs((seq.value(n) - m1.eval(n)).to_double()) * n < 10.0);
  }
  const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  CHECK(std::abs(slope + 2.0) <= 0.1);

  const auto fit = fit_leading_constant(seq, ExtReal(1.0));
  CHECK(std::abs((fit.estimate - A).to_double()) < 1e-10);
}

TEST_CASE("periodic extraction recovers rho") {
  const auto seq = densities_example2(10000, {Mode::kXFloat});
  const ExtComplex root(parse_ext_real("2.545364930374021172514175145541234963128"),
                        parse_ext_real("10.75397517526887611017346351548282307477"));
  const auto ex = extract_periodic_table(seq, model_example2(2), 8, 2, example2_a(), 1000, 10000, 1, {root}, 0);
  const auto rho = example2_rho();
  for (std::size_t k = 0; k < 8; ++k) CHECK(std::abs((ex.table[k] - rho[k]).to_double()) < 3e-3);
  // A synthetic sequence built from the level-3 model is recovered exactly.
  const auto m3 = model_example2(3);
  std::vector<ExtReal> v;
  for (std::size_t n = 1; n <= 3000; ++n) v.push_back(m3.eval(n));
  const auto synth = DensitySeq::approx(v, "synthetic");
  const auto ex2 = extract_periodic_table(synth, model_example2(2), 8, 2, example2_a(), 100, 3000, 0, {}, 0);
  for (std::size_t k = 0; k < 8; ++k) CHECK(std::abs((ex2.table[k] - rho[k]).to_double()) < 1e-20);
}

TEST_CASE("two-poly models") {
  const Rational p(2, 3);
  const ExtReal al(-1.3);
  CHECK(rel(two_poly_ratio(p, p, al), -(p / (Rational(2) - p)).to_ext()) < 1e-30);

  const Rational a(1, 2), b(3, 4);
  const auto root = find_real_primary(CharEquation::two_poly(a, b));
  const auto model = model_two_poly(a, b, root, ExtReal(1.28574621970439));
  const auto seq = densities_two_poly(a, b, 10000, {Mode::kXFloat});
  double prev = 1;
  for (std::size_t n : {100, 1000, 10000}) {
    const double e = rel(model.eval(n), seq.value(n));
    CHECK(e < prev);
    prev = e;
  }
  CHECK(prev < 1e-8);
  CharRoot bad = root;
  bad.alpha = ExtComplex(-1.0);
  CHECK_THROWS_AS(model_two_poly(a, b, bad, ExtReal(1.0)), ValidationError);
}

TEST_CASE("fit is engine- and scale-invariant") {
  const auto x = densities_example2(2000, {Mode::kXFloat});
  const auto q = densities_example2(2000);
  const auto fx = fit_leading_constant(x, ExtReal(1.0));
  const auto fq = fit_leading_constant(q, ExtReal(1.0));
  CHECK(abs(fx.estimate - fq.estimate).to_double() < 1e-25);
  const EnvMeasure m = example_measure("3a");
  const auto s1 = densities_general(m, 400, {Mode::kXFloat});
  const auto s2 = densities_general(m.scaled(Rational(3, 7)), 400, {Mode::kXFloat});
  const ExtReal pw = -(find_real_primary(CharEquation::general(m)).alpha.re() + 1.0);
  CHECK(abs(fit_leading_constant(s1, pw).estimate - fit_leading_constant(s2, pw).estimate).to_double() < 1e-25);
  CHECK_THROWS_AS(fit_leading_constant(x, ExtReal(1.0), 1500, 2000), ValidationError);
}
