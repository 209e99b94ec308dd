#include "limsup/svf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "limsup/errors.hpp"

namespace limsup {

RadiusTuple::RadiusTuple(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw DomainError("radius tuple must be non-empty");
  for (double v : values_) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("radius must be finite and positive, got " + std::to_string(v));
  }
}

bool RadiusTuple::standalone_valid() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v <= 1.0; });
}

RegularityVector::RegularityVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw DomainError("regularity vector must be non-empty");
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("regularity exponent must be finite and >= 0");
    total_ += v;
  }
}

RegularityVector RegularityVector::without_last() const {
  if (values_.size() < 2) throw ContractViolation("cannot drop the only coordinate");
  return RegularityVector(std::vector<double>(values_.begin(), values_.end() - 1));
}

std::vector<std::size_t> rank_radii(std::span<const double> radii, std::span<const double> s) {
  std::vector<std::size_t> order(radii.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (radii[a] != radii[b]) return radii[a] > radii[b];
    return s[a] > s[b];
  });
  return order;
}

SingularValueProfile svf_profile(const RadiusTuple& r, const RegularityVector& s) {
  if (r.size() != s.size()) {
    throw ContractViolation("radius tuple has " + std::to_string(r.size()) + " entries but s has " +
                            std::to_string(s.size()));
  }
  SingularValueProfile p;
  p.permutation_ = rank_radii(r.values(), s.values());
  p.total_ = s.total();
  p.breakpoints_.reserve(r.size() + 1);
  p.slopes_.reserve(r.size());
  p.breakpoints_.push_back({0.0, 0.0});
  for (std::size_t idx : p.permutation_) {
    const double slope = std::log(r[idx]);
    const SvfBreakpoint& prev = p.breakpoints_.back();
    p.slopes_.push_back(slope);
    p.breakpoints_.push_back({prev.t + s[idx], prev.log_value + s[idx] * slope});
  }
  return p;
}

std::size_t SingularValueProfile::piece_of(double t) const {
  for (std::size_t k = 0; k + 1 < breakpoints_.size(); ++k) {
    if (t <= breakpoints_[k + 1].t) return k;
  }
  // t may exceed the ranked partial sum by rounding when total() was summed
  // in the original order
  return slopes_.size() - 1;
}

double SingularValueProfile::log_value(double t) const {
  if (!(t >= 0.0) || t > total_) throw DomainError("t = " + std::to_string(t) + " outside [0, total(s)]");
  const std::size_t k = piece_of(t);
  const SvfBreakpoint& start = breakpoints_[k];
  return start.log_value + (t - start.t) * slopes_[k];
}

double SingularValueProfile::value(double t) const { return std::exp(log_value(t)); }

double log_singular_value(const RadiusTuple& r, const RegularityVector& s, double t) {
  return svf_profile(r, s).log_value(t);
}

double singular_value(const RadiusTuple& r, const RegularityVector& s, double t) {
  return std::exp(log_singular_value(r, s, t));
}

}  // namespace limsup
