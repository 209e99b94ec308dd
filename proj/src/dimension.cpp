#include "limsup/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "limsup/errors.hpp"
#include "limsup/simd/kernels.hpp"
#include "limsup/summation.hpp"

namespace limsup {

namespace {

constexpr std::size_t kChunk = 4096;
constexpr double kCanonicalBracket = 1024.0;

void check_dims(std::size_t sched_dims, const RegularityVector& s) {
  if (sched_dims != s.size()) {
    throw ContractViolation("schedule has " + std::to_string(sched_dims) + " coordinates but s has " +
                            std::to_string(s.size()));
  }
}

void check_exponent(double t, const RegularityVector& s) {
  if (!(t >= 0.0) || t > s.total()) {
    throw DomainError("t = " + std::to_string(t) + " outside [0, " + std::to_string(s.total()) + "]");
  }
}

}  // namespace

ExponentProfile exponent_profile(const PowerLawSchedule& sched, const RegularityVector& s) {
  check_dims(sched.dimension(), s);
  // radius n^-alpha is larger for smaller alpha; rank_radii on -alpha gives
  // alpha ascending with the same tie rule as the singular value function
  std::vector<double> neg(sched.alphas().size());
  for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -sched.alphas()[i];
  const std::vector<std::size_t> order = rank_radii(neg, s.values());

  ExponentProfile p;
  p.total_ = s.total();
  p.breakpoints_.push_back({0.0, 0.0});
  for (std::size_t idx : order) {
    const double a = sched.alphas()[idx];
    const ExponentBreakpoint& prev = p.breakpoints_.back();
    p.slopes_.push_back(a);
    p.breakpoints_.push_back({prev.t + s[idx], prev.e + s[idx] * a});
  }
  return p;
}

double ExponentProfile::value(double t) const {
  if (!(t >= 0.0) || t > total_) throw DomainError("t = " + std::to_string(t) + " outside [0, total(s)]");
  std::size_t k = 0;
  while (k + 1 < slopes_.size() && t > breakpoints_[k + 1].t) ++k;
  return breakpoints_[k].e + (t - breakpoints_[k].t) * slopes_[k];
}

double ExponentProfile::inverse(double level) const {
  if (level <= 0.0) return 0.0;
  if (level > value(total_)) throw DomainError("exponent level exceeds e(total(s))");
  for (std::size_t k = 0; k < slopes_.size(); ++k) {
    const ExponentBreakpoint& a = breakpoints_[k];
    const ExponentBreakpoint& b = breakpoints_[k + 1];
    if (b.e >= level || k + 1 == slopes_.size()) {
      if (b.t == a.t) return a.t;
      return std::clamp(a.t + (level - a.e) / slopes_[k], a.t, b.t);
    }
  }
  return total_;
}

double critical_exponent_series(const PowerLawSchedule& sched, const RegularityVector& s, double tol) {
  if (!(tol > 0.0)) throw DomainError("bisection tolerance must be positive");
  const ExponentProfile prof = exponent_profile(sched, s);
  const double total = s.total();
  // sum_n n^-e converges iff e > 1
  if (prof.value(total) <= 1.0) return total;
  // The bracket does not depend on total(s): profiles that agree below their
  // root (a schedule and its projection) bisect along the same path.
  double lo = 0.0;
  double hi = kCanonicalBracket;
  while (hi < total) hi *= 2.0;
  while (hi - lo > tol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (mid >= total || prof.value(mid) > 1.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  double root = lo + 0.5 * (hi - lo);
  // once the bracket sits inside one linear piece the crossing is exact there
  const auto& bps = prof.breakpoints();
  for (std::size_t k = 0; k + 1 < bps.size(); ++k) {
    if (bps[k].t <= lo && std::min(hi, total) <= bps[k + 1].t && prof.slopes()[k] > 0.0) {
      root = std::clamp(bps[k].t + (1.0 - bps[k].e) / prof.slopes()[k], lo, hi);
      break;
    }
  }
  for (const ExponentBreakpoint& bp : bps) {
    if (std::fabs(bp.t - root) <= tol && prof.value(bp.t) == 1.0) return bp.t;
  }
  // e is non-decreasing: the root is never left of a breakpoint with e <= 1
  for (const ExponentBreakpoint& bp : prof.breakpoints()) {
    if (bp.e <= 1.0) root = std::max(root, bp.t);
  }
  return std::min(root, total);
}

double critical_exponent_series(const ExplicitSchedule& sched, const RegularityVector& s, double tol) {
  check_dims(sched.dimension(), s);
  if (const auto* p = std::get_if<PowerLawSchedule>(&sched.tail())) return critical_exponent_series(*p, s, tol);
  // constant positive terms: the series diverges for every t
  if (std::holds_alternative<ConstantTail>(sched.tail())) return s.total();
  throw Undecidable("finite schedule without a tail model: no critical exponent can be claimed");
}

double critical_exponent_series(const RadiusSchedule& sched, const RegularityVector& s, double tol) {
  return std::visit([&](const auto& v) { return critical_exponent_series(v, s, tol); }, sched);
}

double closed_form_dimension(const PowerLawSchedule& sched, const RegularityVector& s) {
  check_dims(sched.dimension(), s);
  std::vector<double> neg(sched.alphas().size());
  for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -sched.alphas()[i];
  const std::vector<std::size_t> order = rank_radii(neg, s.values());

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < order.size(); ++i) {
    const double ai = sched.alphas()[order[i]];
    double value = 1.0 / ai;
    for (std::size_t j = 0; j < i; ++j) value += s[order[j]] * (1.0 - sched.alphas()[order[j]] / ai);
    best = std::min(best, value);
  }
  return std::min(best, s.total());
}

void log_svf_terms(const RadiusSchedule& sched, const RegularityVector& s, double t, std::uint64_t first,
                   std::size_t count, double* out) {
  const std::size_t d = schedule_dimension(sched);
  check_dims(d, s);
  check_exponent(t, s);
  if (first == 0) throw DomainError("schedule index starts at 1");
  const simd::KernelTable& k = simd::active();
  std::vector<double> log_r(d * std::min(count, kChunk));
  for (std::size_t done = 0; done < count;) {
    const std::size_t m = std::min(kChunk, count - done);
    fill_log_radii(sched, first + done, m, log_r.data(), m);
    k.log_svf(log_r.data(), m, d, s.values().data(), t, m, out + done);
    done += m;
  }
}

std::vector<double> partial_sums_at(const RadiusSchedule& sched, const RegularityVector& s, double t,
                                    std::span<const std::uint64_t> checkpoints) {
  if (checkpoints.empty()) return {};
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] == 0 || (i > 0 && checkpoints[i] <= checkpoints[i - 1])) {
      throw ContractViolation("checkpoints must be positive and strictly increasing");
    }
  }
  const simd::KernelTable& k = simd::active();
  std::vector<double> logs(kChunk), terms(kChunk);
  std::vector<double> out;
  out.reserve(checkpoints.size());
  CompensatedSum sum;
  std::uint64_t n = 1;
  for (std::uint64_t target : checkpoints) {
    while (n <= target) {
      const std::size_t m = static_cast<std::size_t>(std::min<std::uint64_t>(kChunk, target - n + 1));
      log_svf_terms(sched, s, t, n, m, logs.data());
      k.exp(logs.data(), m, terms.data());
      for (std::size_t j = 0; j < m; ++j) sum.add(terms[j]);
      n += m;
    }
    out.push_back(sum.value());
  }
  return out;
}

double partial_sum(const RadiusSchedule& sched, const RegularityVector& s, double t, std::uint64_t n_terms) {
  if (n_terms == 0) throw DomainError("partial sum needs N >= 1");
  const std::uint64_t cp[] = {n_terms};
  return partial_sums_at(sched, s, t, cp).front();
}

double log_log_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ContractViolation("slope needs two or more paired samples");
  double mx = 0.0, my = 0.0;
  const double m = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= m;
  my /= m;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

GrowthEstimate estimate_sum_growth(const RadiusSchedule& sched, const RegularityVector& s, double t,
                                   std::span<const std::uint64_t> blocks) {
  if (blocks.size() < 3) throw ContractViolation("growth estimate needs at least three block sizes");
  GrowthEstimate g;
  g.blocks.assign(blocks.begin(), blocks.end());
  g.sums = partial_sums_at(sched, s, t, blocks);
  // fast convergence saturates the sum in double, which is a slope of 0
  for (std::size_t i = 1; i < g.sums.size(); ++i) {
    if (!(g.sums[i] >= g.sums[i - 1]) || !(g.sums[i - 1] > 0.0)) {
      throw ContractViolation("partial sums decreased between N = " + std::to_string(blocks[i - 1]) +
                              " and N = " + std::to_string(blocks[i]));
    }
  }
  std::vector<double> x(blocks.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(blocks[i]);
  g.slope = log_log_slope(x, g.sums);
  return g;
}

}  // namespace limsup
