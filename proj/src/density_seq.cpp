#include "rgw/density_seq.hpp"

namespace rgw {

std::string to_string(Mode m) { return m == Mode::kRational ? "rational" : "xfloat"; }

Mode parse_mode(const std::string& s) {
  if (s == "rational") return Mode::kRational;
  if (s == "xfloat") return Mode::kXFloat;
  throw ValidationError("unknown mode '" + s + "' (expected rational or xfloat)");
}

DensitySeq DensitySeq::exact(std::vector<Rational> phi, std::string engine) {
  DensitySeq d;
  d.mode_ = Mode::kRational;
  d.engine_ = std::move(engine);
  d.approx_.reserve(phi.size());
  for (const auto& x : phi) d.approx_.push_back(x.to_ext());
  d.exact_ = std::move(phi);
  return d;
}

DensitySeq DensitySeq::approx(std::vector<ExtReal> phi, std::string engine) {
  DensitySeq d;
  d.mode_ = Mode::kXFloat;
  d.engine_ = std::move(engine);
  d.approx_ = std::move(phi);
  return d;
}

const Rational& DensitySeq::exact_value(std::size_t n) const {
  if (mode_ != Mode::kRational) throw DomainError("sequence from " + engine_ + " is not exact");
  return exact_.at(n - 1);
}

const std::vector<Rational>& DensitySeq::exact_values() const {
  if (mode_ != Mode::kRational) throw DomainError("sequence from " + engine_ + " is not exact");
  return exact_;
}

DensitySeq DensitySeq::head(std::size_t n) const {
  if (n > size()) throw DomainError("prefix longer than the sequence");
  DensitySeq d = *this;
  d.approx_.resize(n);
  if (mode_ == Mode::kRational) d.exact_.resize(n);
  return d;
}

}  // namespace rgw
