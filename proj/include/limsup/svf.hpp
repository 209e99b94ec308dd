#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace limsup {

// Side radii r = (r_1, ..., r_d) of a rectangle, one per factor space.
class RadiusTuple {
 public:
  // Throws DomainError unless every entry is finite and strictly positive.
  explicit RadiusTuple(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }

  // Entries in (0, 1]; required when no factor space is attached.
  bool standalone_valid() const;

  friend bool operator==(const RadiusTuple&, const RadiusTuple&) = default;

 private:
  std::vector<double> values_;
};

// Regularity exponents s = (s_1, ..., s_d) of the factor measures.
class RegularityVector {
 public:
  // Throws DomainError unless every entry is finite and >= 0.
  explicit RegularityVector(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }
  double total() const { return total_; }

  // s' = (s_1, ..., s_{d-1}).
  RegularityVector without_last() const;

  friend bool operator==(const RegularityVector& a, const RegularityVector& b) { return a.values_ == b.values_; }

 private:
  std::vector<double> values_;
  double total_ = 0.0;
};

// Ranks coordinates by non-increasing radius. Equal radii are ordered by
// larger exponent first, then by original index, which makes the ranked
// (radius, exponent) sequence independent of how the input was permuted.
std::vector<std::size_t> rank_radii(std::span<const double> radii, std::span<const double> s);

struct SvfBreakpoint {
  double t;
  double log_value;
};

// t -> log Phi_r^s(t): continuous, piecewise linear, concave.
class SingularValueProfile {
 public:
  // breakpoints[0] = (0, 0); breakpoints[k] sits at the k-th partial sum of
  // the ranked exponents.
  const std::vector<SvfBreakpoint>& breakpoints() const { return breakpoints_; }
  // permutation()[k] is the original index of the k-th largest radius.
  const std::vector<std::size_t>& permutation() const { return permutation_; }
  // Slope on piece k (0-based) = log of the k-th largest radius.
  double slope(std::size_t piece) const { return slopes_[piece]; }
  std::size_t pieces() const { return slopes_.size(); }
  double total() const { return total_; }

  // Index of the piece holding t: the first k with t <= breakpoints[k + 1].t.
  std::size_t piece_of(double t) const;

  double log_value(double t) const;
  double value(double t) const;

 private:
  friend SingularValueProfile svf_profile(const RadiusTuple&, const RegularityVector&);
  std::vector<SvfBreakpoint> breakpoints_;
  std::vector<double> slopes_;
  std::vector<std::size_t> permutation_;
  double total_ = 0.0;
};

SingularValueProfile svf_profile(const RadiusTuple& r, const RegularityVector& s);

// Phi_r^s(t). Throws ContractViolation on a dimension mismatch and
// DomainError for t outside [0, total(s)].
double singular_value(const RadiusTuple& r, const RegularityVector& s, double t);
double log_singular_value(const RadiusTuple& r, const RegularityVector& s, double t);

}  // namespace limsup
