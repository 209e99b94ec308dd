#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "limsup/svf.hpp"

namespace limsup {

// r_{n,i} = coefficient_i * n^(-alpha_i).
class PowerLawSchedule {
 public:
  // Empty coefficients mean all ones. Throws DomainError for a non-positive
  // or non-finite alpha or coefficient.
  explicit PowerLawSchedule(std::vector<double> alphas, std::vector<double> coefficients = {});

  std::size_t dimension() const { return alphas_.size(); }
  const std::vector<double>& alphas() const { return alphas_; }
  const std::vector<double>& coefficients() const { return coefficients_; }
  bool unit_coefficients() const;

  // Smallest n >= 1 from which every r_{n,i} <= 1.
  std::uint64_t n_min() const { return n_min_; }

  double log_radius(std::uint64_t n, std::size_t i) const;
  RadiusTuple radii(std::uint64_t n) const;

  // Same exponents, every coefficient multiplied by `factor`.
  PowerLawSchedule scaled(double factor) const;
  // Coordinates reordered: new coordinate k is old coordinate order[k].
  PowerLawSchedule permuted(const std::vector<std::size_t>& order) const;
  // Drops the last coordinate.
  PowerLawSchedule without_last() const;

  // Order that makes r_{n,.} non-increasing for all large n: alpha ascending,
  // larger coefficient first on ties.
  std::vector<std::size_t> asymptotic_order() const;
  // First n from which coordinates stay non-increasing in their current order,
  // or nullopt if they never do.
  std::optional<std::uint64_t> ordered_from() const;

  std::string descriptor() const;

  friend bool operator==(const PowerLawSchedule&, const PowerLawSchedule&) = default;

 private:
  std::vector<double> alphas_;
  std::vector<double> coefficients_;
  std::uint64_t n_min_ = 1;
};

// Every tuple equals `radii` from the end of the finite part onwards.
struct ConstantTail {
  RadiusTuple radii;
  friend bool operator==(const ConstantTail&, const ConstantTail&) = default;
};

using ScheduleTail = std::variant<std::monostate, PowerLawSchedule, ConstantTail>;

// A finite list of tuples, optionally continued by a tail model. A power-law
// tail is indexed by absolute n.
class ExplicitSchedule {
 public:
  // Throws DomainError on an empty list, inconsistent dimensions, or radii
  // outside (0, 1].
  explicit ExplicitSchedule(std::vector<RadiusTuple> tuples, ScheduleTail tail = {});

  std::size_t dimension() const { return tuples_.front().size(); }
  std::size_t finite_length() const { return tuples_.size(); }
  const std::vector<RadiusTuple>& tuples() const { return tuples_; }
  const ScheduleTail& tail() const { return tail_; }
  bool has_tail() const { return !std::holds_alternative<std::monostate>(tail_); }

  // Throws DomainError past the finite part when there is no tail.
  double log_radius(std::uint64_t n, std::size_t i) const;
  RadiusTuple radii(std::uint64_t n) const;

  std::string descriptor() const;

 private:
  std::vector<RadiusTuple> tuples_;
  ScheduleTail tail_;
};

using RadiusSchedule = std::variant<PowerLawSchedule, ExplicitSchedule>;

std::size_t schedule_dimension(const RadiusSchedule& sched);
std::string schedule_descriptor(const RadiusSchedule& sched);
RadiusTuple schedule_radii(const RadiusSchedule& sched, std::uint64_t n);

// Fills log r_{n,i} for n = first .. first + count - 1, column-wise:
// out[i * stride + j] = log r_{first + j, i}.
void fill_log_radii(const RadiusSchedule& sched, std::uint64_t first, std::size_t count, double* out,
                    std::size_t stride);

}  // namespace limsup

namespace limsup {

// Inverse of descriptor(): "power:alphas=2,3[;coefficients=1,1]" or
// "explicit:tuples=0.5,0.25|0.25,0.125;tail=none|constant:a,b|(power:...)".
// DomainError on malformed text.
RadiusSchedule parse_schedule(const std::string& descriptor);

}  // namespace limsup
