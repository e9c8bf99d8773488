#include "rgw/mcsim.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <limits>
#include <mutex>
#include <unordered_map>

#include "rgw/parallel.hpp"
#include "rgw/series.hpp"

namespace rgw {

SplitMix64 SplitMix64::stream(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 a(seed);
  SplitMix64 b(a() ^ (index * 0xd1b54a32d192ed03ULL));
  return SplitMix64(b());
}

void SimConfig::validate() const {
  if (trials < 1) throw ValidationError("trials must be at least 1");
  if (cap < 1) throw ValidationError("population cap must be at least 1");
  if (measure.components().empty()) throw ValidationError("empty measure");
}

std::uint64_t EmpiricalDist::count(std::size_t n) const {
  const auto it = counts.find(n);
  return it == counts.end() ? 0 : it->second;
}

double EmpiricalDist::ratio(std::size_t n) const {
  const auto c1 = count(1);
  if (c1 == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(count(n)) / static_cast<double>(c1);
}

double EmpiricalDist::ratio_stderr(std::size_t n) const {
  const double c1 = static_cast<double>(count(1)), cn = static_cast<double>(count(n));
  if (c1 == 0 || cn == 0) return std::numeric_limits<double>::infinity();
  return ratio(n) * std::sqrt(1.0 / cn + 1.0 / c1);
}

namespace {

class EnvSampler {
 public:
  explicit EnvSampler(const EnvMeasure& mu) : comps_(mu.components()) {
    // Selection probabilities in exact arithmetic so c*mu samples like mu.
    std::vector<Rational> mass;
    Rational total(0);
    for (const auto& c : comps_) {
      mass.push_back(c.kind == MeasureComponent::Kind::kPoint ? c.weight : c.weight * (c.hi - c.lo));
      total += mass.back();
    }
    Rational acc(0);
    for (std::size_t i = 0; i < comps_.size(); ++i) {
      acc += mass[i];
      pick_.push_back((acc / total).to_ext().to_double());
      std::vector<double> cdf;
      if (comps_[i].kind == MeasureComponent::Kind::kPoint) {
        Rational s(0);
        for (const auto& p : comps_[i].coeffs) {
          s += p.constant();
          cdf.push_back(s.to_ext().to_double());
        }
        cdf.back() = 1.0;
      }
      fixed_.push_back(std::move(cdf));
      lo_.push_back(comps_[i].lo.to_ext().to_double());
      width_.push_back((comps_[i].hi - comps_[i].lo).to_ext().to_double());
    }
    pick_.back() = 1.0;
  }

  // Offspring CDF over 1..d for a freshly drawn environment.
  void draw(SplitMix64& rng, std::vector<double>& cdf) const {
    const double u = rng.uniform();
    std::size_t i = 0;
    while (i + 1 < pick_.size() && u >= pick_[i]) ++i;
    if (!fixed_[i].empty()) {
      cdf = fixed_[i];
      return;
    }
    const ExtReal r(lo_[i] + width_[i] * rng.uniform());
    cdf.clear();
    double s = 0;
    for (const auto& p : comps_[i].coeffs) {
      s += std::max(0.0, p.eval(r).to_double());
      cdf.push_back(s);
    }
    for (auto& v : cdf) v /= s;
    cdf.back() = 1.0;
  }

 private:
  std::vector<MeasureComponent> comps_;
  std::vector<double> pick_;
  std::vector<std::vector<double>> fixed_;
  std::vector<double> lo_, width_;
};

// Population after cfg.t steps, or 0 when the cap is hit.
std::size_t run_trial(const EnvSampler& env, const SimConfig& cfg, std::uint64_t index, std::vector<double>& cdf) {
  SplitMix64 rng = SplitMix64::stream(cfg.seed, index);
  std::size_t x = 1;
  for (std::size_t step = 0; step < cfg.t; ++step) {
    env.draw(rng, cdf);
    std::size_t next = 0;
    for (std::size_t k = 0; k < x; ++k) {
      const double u = rng.uniform();
      const auto j = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      next += std::min(j, cdf.size() - 1) + 1;
    }
    if (next > cfg.cap) return 0;
    x = next;
  }
  return x;
}

}  // namespace

EmpiricalDist simulate(const SimConfig& cfg) {
  cfg.validate();
  const EnvSampler env(cfg.measure);
  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (cfg.trials + kChunk - 1) / kChunk;
  EmpiricalDist out;
  std::mutex mu;
  parallel_for(chunks, resolve_threads(cfg.threads), [&](std::size_t c) {
    std::unordered_map<std::size_t, std::uint64_t> local;
    std::uint64_t over = 0;
    std::vector<double> cdf;
    const std::size_t end = std::min(cfg.trials, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      const std::size_t x = run_trial(env, cfg, i, cdf);
      if (x == 0) ++over;
      else ++local[x];
    }
    std::lock_guard<std::mutex> lock(mu);
    for (const auto& [n, k] : local) out.counts[n] += k;
    out.overflowed += over;
  });
  out.trials = cfg.trials - out.overflowed;
  return out;
}

ExactDist exact_distribution(const EnvMeasure& mu, std::size_t t, std::size_t n_max) {
  if (n_max < 1) throw ValidationError("n_max must be at least 1");
  ExactDist d;
  d.prob.assign(n_max + 1, Rational(0));
  d.prob[1] = Rational(1);
  if (t > 0) {
    const TransferMatrix a(mu, n_max);
    const Rational inv_mass = Rational(1) / a.mass();
    for (std::size_t step = 0; step < t; ++step) {
      std::vector<Rational> next(n_max + 1, Rational(0));
      for (std::size_t n = 1; n <= n_max; ++n) {
        Rational s(0);
        for (std::size_t k = 1; k <= n; ++k)
          if (!d.prob[k].is_zero()) s += d.prob[k] * a.raw(n, k);
        next[n] = s * inv_mass;
      }
      d.prob.swap(next);
    }
  }
  Rational total(0);
  for (const auto& p : d.prob) total += p;
  d.deficit = Rational(1) - total;
  return d;
}

ChiSquare chi_square_test(const EmpiricalDist& emp, const ExactDist& exact, double level) {
  const double total = static_cast<double>(emp.trials + emp.overflowed);
  if (total <= 0) throw ValidationError("empty sample");
  const std::size_t n_max = exact.prob.size() - 1;
  ChiSquare r;
  double pooled_e = exact.deficit.to_ext().to_double() * total;
  double pooled_o = static_cast<double>(emp.overflowed);
  for (const auto& [n, k] : emp.counts)
    if (n > n_max) pooled_o += static_cast<double>(k);
  std::vector<std::pair<double, double>> bins;  // (observed, expected)
  for (std::size_t n = 0; n <= n_max; ++n) {
    const double e = exact.prob[n].to_ext().to_double() * total;
    const double o = static_cast<double>(emp.count(n));
    if (e >= 5.0) {
      bins.emplace_back(o, e);
    } else {
      pooled_e += e;
      pooled_o += o;
    }
  }
  if (pooled_e > 0 || pooled_o > 0) {
    if (pooled_e >= 5.0 || bins.empty()) {
      bins.emplace_back(pooled_o, pooled_e);
    } else {
      bins.back().first += pooled_o;
      bins.back().second += pooled_e;
    }
  }
  if (bins.size() < 2) throw ValidationError("chi-square test needs at least two bins");
  for (const auto& [o, e] : bins) {
    if (e <= 0) {
      if (o > 0) r.statistic = std::numeric_limits<double>::infinity();
      continue;
    }
    r.statistic += (o - e) * (o - e) / e;
  }
  r.bins = bins.size();
  r.df = bins.size() - 1;
  r.critical = boost::math::quantile(boost::math::chi_squared_distribution<double>(static_cast<double>(r.df)), level);
  r.pass = r.statistic <= r.critical;
  return r;
}

}  // namespace rgw
