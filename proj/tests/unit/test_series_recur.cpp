#include "doctest.h"
#include "rgw/recur.hpp"
#include "rgw/series.hpp"

using namespace rgw;

namespace {

TruncSeries<Rational> series_of(std::initializer_list<Rational> c) {
  TruncSeries<Rational> s(c.size());
  std::size_t n = 1;
  for (const auto& x : c) s.set(n++, x);
  return s;
}

Rational R(long p, long q = 1) { return Rational(p, q); }

// Example-2 listed psi values.
std::vector<Rational> listed_psi() {
  const Rational one(1);
  auto inv = [](long k) { return Rational(1, k); };
  std::vector<Rational> psi(16);
  psi[2] = R(3, 2);
  psi[3] = R(2) * (one - inv(3));
  psi[4] = R(5, 2) * (one - inv(3));
  psi[5] = R(3) * (one - inv(5) - inv(3));
  psi[6] = R(7, 2) * (one - inv(5) - inv(3));
  const Rational b7 = one - inv(7) - inv(5) - inv(3) + inv(21);
  psi[7] = R(4) * b7;
  psi[8] = R(9, 2) * b7;
  const Rational b9 = one - inv(9) - inv(7) - inv(5) - inv(3) + inv(27) + inv(21);
  psi[9] = R(5) * b9;
  psi[10] = R(11, 2) * b9;
  const Rational b11 = one - inv(11) - inv(9) - inv(7) - inv(5) - inv(3) + inv(55) + inv(33) + inv(27) + inv(21);
  psi[11] = R(6) * b11;
  psi[12] = R(13, 2) * b11;
  const Rational b13 = one - inv(13) - inv(11) - inv(9) - inv(7) - inv(5) - inv(3) + inv(65) + inv(55) + inv(39) +
                       inv(33) + inv(27) + inv(21);
  psi[13] = R(7) * b13;
  psi[14] = R(15, 2) * b13;
  psi[15] = R(8) * (one - inv(15) - inv(13) - inv(11) - inv(9) - inv(7) - inv(5) - inv(3) + inv(15 * 7) +
                    inv(15 * 5) + inv(13 * 5) + inv(11 * 5) + inv(15 * 3) + inv(13 * 3) + inv(11 * 3) + inv(9 * 3) +
                    inv(7 * 3) - inv(15 * 7 * 3));
  return psi;
}

}  // namespace

TEST_CASE("composition with a polynomial") {
  const GenFunc P({R(1, 2), R(1, 2)});
  CHECK(compose_poly(P, TruncSeries<Rational>::identity(4)) == series_of({R(1, 2), R(1, 2), R(0), R(0)}));
  CHECK(compose_poly(GenFunc({R(0), R(1)}), series_of({R(1), R(1), R(0), R(0)})) ==
        series_of({R(0), R(1), R(0), R(1)}));
  CHECK(compose_poly(P, series_of({R(1), R(3), R(0)})) == series_of({R(1, 2), R(5, 4), R(3, 2)}));
  const auto f = compose_poly(P, TruncSeries<ExtReal>::identity(3));
  CHECK(f[1] == ExtReal(0.5));
}

TEST_CASE("one application of the averaged operator") {
  const auto h = schroder_apply(example_measure("1"), TruncSeries<Rational>::identity(3));
  CHECK(h[1] == R(1));
  CHECK(h[2] == R(1, 3));
  const EnvMeasure trivial = EnvMeasure::finite({Atom{R(1), GenFunc({R(1)})}});
  CHECK(schroder_apply(trivial, TruncSeries<Rational>::identity(5)) == TruncSeries<Rational>::identity(5));
}

TEST_CASE("operator iterates converge geometrically, not in finitely many steps") {
  const auto it = schroder_iterates(example_measure("2"), 3, 40);
  // s_2 <- 1 + (2/3) s_2 from s_2 = 0.
  CHECK(it[1][2] == R(1));
  CHECK(it[2][2] == R(5, 3));
  CHECK(it[3][2] == R(19, 9));
  CHECK(it[3][2] != it[4][2]);
  const double err = std::abs(it[40][2].to_double() - 3.0);
  CHECK(err < 1e-6);
  CHECK(err > 0);
  const auto it1 = schroder_iterates(example_measure("1"), 2, 200);
  CHECK(std::abs(it1[200][2].to_double() - 1.5) < 1e-15);
}

TEST_CASE("operator fixed point") {
  const auto r = schroder_fixpoint(example_measure("2"), 4);
  CHECK(r.seq.exact_values() == std::vector<Rational>{R(1), R(3), R(4), R(20, 3)});
  CHECK(r.iterations > 10);
  CHECK(r.defect == ExtReal(0.0));
  const auto one = schroder_fixpoint(example_measure("2"), 1);
  CHECK(one.seq.exact_values() == std::vector<Rational>{R(1)});
  const EnvMeasure lf = EnvMeasure::finite({Atom{R(1), GenFunc::linear_fractional(R(1, 2))}});
  const auto l = schroder_fixpoint(lf, 5);
  CHECK(l.seq.exact_values() == std::vector<Rational>(5, R(1)));
  CHECK(l.seq.exact_values() == densities_linfrac(5).exact_values());
  const auto x = schroder_fixpoint(example_measure("1"), 30, 1e-28, 100000, Mode::kXFloat);
  const auto e = densities_example1(30);
  for (std::size_t n = 1; n <= 30; ++n)
    CHECK(std::abs(((x.seq.value(n) - e.value(n)) / e.value(n)).to_double()) < 1e-26);
  CHECK_THROWS_AS(schroder_fixpoint(example_measure("1"), 30, 1e-28, 3, Mode::kXFloat), FixpointNotConverged);
}

TEST_CASE("example 0 mixture recovers z/(1-z)") {
  const auto r = schroder_fixpoint(example_measure("0"), 10);
  CHECK(r.seq.exact_values() == std::vector<Rational>(10, R(1)));
  const auto g = densities_general(example_measure("0"), 10);
  CHECK(g.exact_values() == std::vector<Rational>(10, R(1)));
}

TEST_CASE("partial Bell polynomials") {
  const std::vector<Rational> x{R(1), R(2), R(3), R(5)};
  // B_{4,2} = 4 x1 x3 + 3 x2^2
  CHECK(partial_bell(4, 2, x) == R(24));
  CHECK(partial_bell(4, 4, x) == R(1));
  CHECK(partial_bell(4, 1, x) == R(5));
  CHECK(partial_bell(3, 2, x) == R(6));  // 3 x1 x2
  // (k!/n!) B_{n,k}(j! p_j) = [z^n] P^k.
  const GenFunc P({R(1, 5), R(1, 2), R(3, 10)});
  std::vector<Rational> xp;
  for (std::size_t j = 1; j <= 10; ++j) xp.push_back(factorial(j) * P.p(j));
  for (std::size_t k = 1; k <= 4; ++k) {
    TruncSeries<Rational> zk(10);
    zk.set(k, R(1));
    const auto pk = compose_poly(P, zk);
    for (std::size_t n = k; n <= 10; ++n) CHECK(factorial(k) * partial_bell(n, k, xp) / factorial(n) == pk[n]);
  }
}

TEST_CASE("general engine values and the printed variant") {
  const auto g1 = densities_general(example_measure("1"), 3);
  CHECK(g1.exact_value(2) == R(3, 2));
  CHECK(g1.exact_value(3) == R(16, 9));
  CHECK(densities_general(example_measure("2"), 3).exact_value(3) == R(4));
  CHECK(densities_general(example_measure("1"), 2, {}, true).exact_value(2) == R(3));
  const auto same = densities_general(EnvMeasure::two_poly(R(2, 3), R(2, 3)), 25);
  CHECK(same.exact_values() == densities_two_poly(R(2, 3), R(2, 3), 25).exact_values());
  const EnvMeasure bad = EnvMeasure::finite({Atom{R(1), GenFunc({R(1)})}});
  CHECK_THROWS_AS(densities_general(bad, 3), ValidationError);
}

TEST_CASE("specialized recurrences") {
  const auto e1 = densities_example1(3);
  CHECK(e1.exact_values() == std::vector<Rational>{R(1), R(3, 2), R(16, 9)});
  const auto e2 = densities_example2(15);
  const auto psi = listed_psi();
  for (std::size_t n = 2; n <= 15; ++n) CHECK(e2.exact_psi(n) == psi[n]);
  for (std::size_t n = 2; n <= 15; n += 2)
    CHECK(e2.exact_value(n) * R(static_cast<long>(n - 1)) == e2.exact_value(n - 1) * R(static_cast<long>(n + 1)));
  CHECK(densities_two_poly(R(7, 16), R(3, 4), 2).exact_value(2) == R(208, 111));
  CHECK(densities_linfrac(5).exact_values() == std::vector<Rational>(5, R(1)));
  CHECK(densities_linfrac(1).size() == 1);
}

TEST_CASE("c_{n,j} table identity") {
  const CnjTable t(60);
  CHECK(t.at(2, 1) == R(1, 2));
  CHECK(t.at(3, 1) == R(1));
  for (std::size_t n = 2; n <= 60; ++n)
    for (std::size_t j = 1; 2 * j <= n; ++j) {
      const Rational prev = 2 * j <= n - 1 ? t.at(n - 1, j) : R(0);
      CHECK(t.at(n, j) == prev + pow(R(1, 2), static_cast<long>(n - j)) * binomial(n - j, j));
    }
}

TEST_CASE("cross-engine equality in exact arithmetic") {
  const std::size_t N = 40;
  const auto op1 = schroder_fixpoint(example_measure("1"), N).seq.exact_values();
  CHECK(op1 == densities_general(example_measure("1"), N).exact_values());
  CHECK(op1 == densities_example1(N).exact_values());
  const auto op2 = schroder_fixpoint(example_measure("2"), N).seq.exact_values();
  CHECK(op2 == densities_general(example_measure("2"), N).exact_values());
  CHECK(op2 == densities_example2(N).exact_values());
  const auto op3 = schroder_fixpoint(example_measure("3a"), N).seq.exact_values();
  CHECK(op3 == densities_general(example_measure("3a"), N).exact_values());
  CHECK(op3 == densities_two_poly(R(7, 16), R(3, 4), N).exact_values());
}

TEST_CASE("double-double engines track the exact values") {
  auto close = [](const DensitySeq& a, const DensitySeq& b, double tol) {
    double worst = 0;
    for (std::size_t n = 1; n <= std::min(a.size(), b.size()); ++n)
      worst = std::max(worst, std::abs(((a.value(n) - b.value(n)) / b.value(n)).to_double()));
    return worst < tol;
  };
  const RecurOptions xf{Mode::kXFloat};
  const auto e1 = densities_example1(120);
  CHECK(close(densities_example1(120, xf, Example1Algo::kWindowed), e1, 1e-27));
  CHECK(close(densities_example1(120, xf, Example1Algo::kCnjTable), e1, 1e-27));
  CHECK(close(densities_example1(2000, xf, Example1Algo::kWindowed),
              densities_example1(2000, xf, Example1Algo::kCnjTable), 1e-26));
  CHECK(close(densities_example2(400, xf), densities_example2(400), 1e-28));
  CHECK(close(densities_quadratic_windowed(example_measure("2"), 400), densities_example2(400), 1e-27));
  CHECK(close(densities_two_poly(R(7, 16), R(3, 4), 100, xf), densities_two_poly(R(7, 16), R(3, 4), 100), 1e-27));
  CHECK(close(densities_general(example_measure("1"), 60, xf), e1, 1e-27));
  CHECK(close(densities_general(example_measure("3b"), 60, xf), densities_two_poly(R(1, 2), R(3, 4), 60), 1e-27));
  // A uniform block on an inner interval, both edges inside (0,1).
  const EnvMeasure inner = EnvMeasure::quad_uniform(R(1, 5), R(7, 10));
  CHECK(close(densities_quadratic_windowed(inner, 80), densities_general(inner, 80), 1e-26));
}

TEST_CASE("positivity and normalization across engines") {
  for (const char* name : {"0", "1", "2", "3a", "3b", "emu1"}) {
    const auto g = densities_general(example_measure(name), 20);
    CHECK(g.exact_value(1) == R(1));
    for (std::size_t n = 1; n <= 20; ++n) CHECK(g.exact_value(n).sign() >= 0);
  }
  const auto w = densities_quadratic_windowed(example_measure("1"), 5000);
  CHECK(w.value(1) == ExtReal(1.0));
  for (std::size_t n = 1; n <= 5000; ++n) CHECK(w.value(n).hi() > 0);
}

TEST_CASE("measure scaling leaves densities unchanged") {
  for (const char* name : {"1", "2", "3a"}) {
    const EnvMeasure m = example_measure(name);
    CHECK(densities_general(m, 20).exact_values() == densities_general(m.scaled(R(1, 2)), 20).exact_values());
    CHECK(schroder_fixpoint(m, 20).seq.exact_values() ==
          schroder_fixpoint(m.scaled(R(7, 3)), 20).seq.exact_values());
  }
}
