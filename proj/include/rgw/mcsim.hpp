#pragma once

// Monte Carlo for the branching process in a random environment, and the
// exact finite-horizon law it is checked against.

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "rgw/model.hpp"

namespace rgw {

// SplitMix64. One stream per trial, keyed by (seed, trial index), so the
// outcome of a trial never depends on which thread ran it.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  explicit SplitMix64(std::uint64_t state) : s_(state) {}
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t operator()() {
    std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~0ULL; }

 private:
  std::uint64_t s_;
};

struct SimConfig {
  EnvMeasure measure;
  std::size_t t = 1;
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  std::size_t cap = 1000000;  // individuals per trial
  std::size_t threads = 0;    // 0: resolve_threads()

  void validate() const;
};

struct EmpiricalDist {
  std::map<std::size_t, std::uint64_t> counts;  // population size at t -> trials
  std::uint64_t trials = 0;      // accepted trials, equals the sum of counts
  std::uint64_t overflowed = 0;  // trials that hit the cap

  std::uint64_t count(std::size_t n) const;
  // count(n)/count(1); the standard error uses var(log ratio) = 1/c_n + 1/c_1.
  double ratio(std::size_t n) const;
  double ratio_stderr(std::size_t n) const;

  friend bool operator==(const EmpiricalDist&, const EmpiricalDist&) = default;
};

// Each step draws one r from the normalized measure and every individual
// reproduces by P_r independently.
EmpiricalDist simulate(const SimConfig& cfg);

struct ExactDist {
  std::vector<Rational> prob;  // prob[n] = P(X_t = n), n = 0..N
  Rational deficit;            // P(X_t > N)
};

// Averaged t-fold composition: row e_1 times A^t with
// A[k][n] = int [z^n] P_r(z)^k dmu / mass. Exact for n <= N since p_0 = 0.
ExactDist exact_distribution(const EnvMeasure& mu, std::size_t t, std::size_t n_max);

struct ChiSquare {
  double statistic = 0;
  std::size_t df = 0;
  double critical = 0;  // 99% quantile
  bool pass = false;
  std::size_t bins = 0;
};

// Bins with expected count >= 5 stand alone; the rest, the tail past N and
// the overflowed trials are pooled into one bin.
ChiSquare chi_square_test(const EmpiricalDist& emp, const ExactDist& exact, double level = 0.99);

}  // namespace rgw
