#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "limsup/schedule.hpp"
#include "limsup/svf.hpp"

namespace limsup {

struct ExponentBreakpoint {
  double t;
  double e;
};

// e(t) with Phi_{r_n}^s(t) = n^(-e(t)) for r_{n,i} = n^(-alpha_i). Continuous,
// non-decreasing, piecewise linear with slope alpha_(k) on piece k, alphas
// ranked ascending.
class ExponentProfile {
 public:
  const std::vector<ExponentBreakpoint>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& slopes() const { return slopes_; }
  double total() const { return total_; }

  double value(double t) const;
  // Smallest t with e(t) >= level; DomainError if level > e(total()).
  double inverse(double level) const;

 private:
  friend ExponentProfile exponent_profile(const PowerLawSchedule&, const RegularityVector&);
  std::vector<ExponentBreakpoint> breakpoints_;
  std::vector<double> slopes_;
  double total_ = 0.0;
};

ExponentProfile exponent_profile(const PowerLawSchedule& sched, const RegularityVector& s);

constexpr double kDefaultBisectionTol = 1e-9;

// inf{t : sum_n Phi_{r_n}^s(t) < inf} ^ total(s) by bisection on e(t) = 1.
// Coefficients never move the root and are ignored.
double critical_exponent_series(const PowerLawSchedule& sched, const RegularityVector& s,
                                double tol = kDefaultBisectionTol);
// Uses the declared tail; throws Undecidable when there is none.
double critical_exponent_series(const ExplicitSchedule& sched, const RegularityVector& s,
                                double tol = kDefaultBisectionTol);
double critical_exponent_series(const RadiusSchedule& sched, const RegularityVector& s,
                                double tol = kDefaultBisectionTol);

// min_i [1/alpha_i + sum_{j<i} s_j (1 - alpha_j / alpha_i)] ^ total(s) with
// coordinates ranked by ascending alpha.
double closed_form_dimension(const PowerLawSchedule& sched, const RegularityVector& s);

// log Phi_{r_n}^s(t) for n = first .. first + count - 1.
void log_svf_terms(const RadiusSchedule& sched, const RegularityVector& s, double t, std::uint64_t first,
                   std::size_t count, double* out);

// S_N(t) = sum_{n=1}^N Phi_{r_n}^s(t), compensated.
double partial_sum(const RadiusSchedule& sched, const RegularityVector& s, double t, std::uint64_t n_terms);

// Partial sums at several strictly increasing N in one pass.
std::vector<double> partial_sums_at(const RadiusSchedule& sched, const RegularityVector& s, double t,
                                    std::span<const std::uint64_t> checkpoints);

struct GrowthEstimate {
  double slope;
  std::vector<std::uint64_t> blocks;
  std::vector<double> sums;
};

// Least-squares slope of log S_N(t) against log N over `blocks` (>= 3,
// strictly increasing). For power laws it tracks max(0, 1 - e(t)).
GrowthEstimate estimate_sum_growth(const RadiusSchedule& sched, const RegularityVector& s, double t,
                                   std::span<const std::uint64_t> blocks);

// Least-squares slope of log y against log x.
double log_log_slope(std::span<const double> x, std::span<const double> y);

}  // namespace limsup
