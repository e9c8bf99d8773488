#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rgw/error.hpp"
#include "rgw/rational.hpp"

namespace rgw {

enum class Mode { kRational, kXFloat };

std::string to_string(Mode m);
Mode parse_mode(const std::string& s);

// phi_1..phi_N with the engine that produced them. Rational sequences also
// carry their double-double images so numeric consumers need not care.
class DensitySeq {
 public:
  DensitySeq() = default;
  static DensitySeq exact(std::vector<Rational> phi, std::string engine);
  static DensitySeq approx(std::vector<ExtReal> phi, std::string engine);

  Mode mode() const { return mode_; }
  const std::string& engine() const { return engine_; }
  std::size_t size() const { return approx_.size(); }

  // 1-based accessors.
  const ExtReal& value(std::size_t n) const { return approx_.at(n - 1); }
  const Rational& exact_value(std::size_t n) const;
  ExtReal psi(std::size_t n) const { return value(n) / static_cast<double>(n); }
  Rational exact_psi(std::size_t n) const { return exact_value(n) / Rational(static_cast<long>(n)); }

  const std::vector<ExtReal>& values() const { return approx_; }
  const std::vector<Rational>& exact_values() const;

  // Prefix of the first n terms.
  DensitySeq head(std::size_t n) const;

 private:
  Mode mode_ = Mode::kXFloat;
  std::string engine_;
  std::vector<Rational> exact_;
  std::vector<ExtReal> approx_;
};

}  // namespace rgw
