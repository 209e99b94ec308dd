#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "limsup/covers.hpp"
#include "limsup/dimension.hpp"
#include "limsup/rng.hpp"
#include "limsup/schedule.hpp"
#include "limsup/spaces.hpp"

namespace limsup {

// Centers omega_n of the random rectangles, drawn from the product measure.
// Coordinate i of omega_n is a pure function of (seed, i, n), so any window
// can be generated without replaying the prefix.
class OmegaStream {
 public:
  OmegaStream(std::uint64_t seed, ProductSpace space);

  std::uint64_t seed() const { return seed_; }
  const ProductSpace& space() const { return space_; }

  std::vector<Point> at(std::uint64_t n) const;
  Point coordinate(std::uint64_t n, std::size_t i) const;
  StreamAddress address(std::size_t i) const;

 private:
  std::uint64_t seed_;
  ProductSpace space_;
  PhiloxKey key_;
};

struct CheckpointValue {
  std::uint64_t n;
  double value;
};

struct FiberSumResult {
  std::vector<Point> anchor;
  double u = 0.0;
  std::vector<CheckpointValue> partials;
  // c * sum Phi(s_1 + ... + s_{d-1} + u), c = prod_{i<d} c_i^-1
  std::vector<CheckpointValue> expectation_lower;
  // sum mu'(rect(x', r_n')) r_{n,d}^u, the exact mean of the partial sums
  std::vector<CheckpointValue> expectation_exact;
  std::vector<std::uint64_t> hits;

  bool inconclusive() const { return hits.empty() || hits.back() == 0; }
};

// sum_{n <= N} chi(omega_n' in rect(x', r_n')) r_{n,d}^u at each checkpoint.
// Tuples must be non-increasing in every n (relabel coordinates first);
// u outside [0, s_d] is a DomainError.
FiberSumResult fiber_hit_sum(const OmegaStream& stream, const RadiusSchedule& sched, std::span<const Point> anchor,
                             double u, std::span<const std::uint64_t> checkpoints);

struct TailBoundEntry {
  std::uint64_t n;
  std::uint64_t m;
  double empirical;  // fraction of trials with sum_{k<=n} xi_k <= m
  double bound;      // 2 / m
  double sigma;      // sqrt(q (1 - q) / trials), q = min(1, 2/m)
  bool within() const { return empirical <= bound + 3.0 * sigma; }
};

struct TailBoundTable {
  std::uint64_t trials = 0;
  std::vector<TailBoundEntry> entries;
  std::size_t violations() const;
};

// Independent Bernoulli(p_n) trials. For each checkpoint N and each integer
// 1 <= M <= (1/2) sum_{n<=N} p_n, the empirical P{sum_{n<=N} xi_n <= M}.
// Checkpoints default to {p.size()}. Requires trials >= 1000.
TailBoundTable divergence_tail_bound_test(std::span<const double> p, std::uint64_t trials, std::uint64_t seed,
                                          std::span<const std::uint64_t> checkpoints = {});

struct DensityCell {
  std::vector<Point> center;
  std::uint64_t count_half = 0;  // horizon N/2
  std::uint64_t count = 0;       // horizon N
  std::uint64_t ball_hits = 0;   // n <= N with d(omega_n, center) <= r_n
};

struct DensityReport {
  double delta = 0.0;
  std::uint64_t horizon = 0;
  std::vector<DensityCell> cells;
  std::uint64_t min_count_half = 0;
  std::uint64_t min_count = 0;
  bool passed = false;
};

// Occupancy of a delta-grid: cells of width 1/ceil(1/delta) on the interval
// and circle, cylinders of the first level with lambda^k <= delta on a
// Cantor set, products across factors. Passes when every cell is hit by
// N and the minimum count grows from N/2 to N.
DensityReport density_check(const OmegaStream& stream, std::span<const double> radii, double delta,
                            std::uint64_t horizon);

struct TailCoverRow {
  std::uint64_t n;
  double radius;
  double count;
  double bound;
  double term;       // count * (2 radius)^t
  double reference;  // 2^t C Phi(t)
};

struct TailCoverProfile {
  double t = 0.0;
  std::uint64_t first = 0;
  std::uint64_t last = 0;
  double value = 0.0;
  double reference = 0.0;
  std::vector<TailCoverRow> rows;
  bool dominated() const { return value <= reference; }
};

// Builds the rectangle cover of rect(omega_n, r_n) at the radius of the piece
// holding t, for n in [first, last].
TailCoverProfile tail_cover_sum(const OmegaStream& stream, const RadiusSchedule& sched, double t, std::uint64_t first,
                                std::uint64_t last);

enum class CheckStatus { pass, fail, skip, inconclusive };
std::string_view status_name(CheckStatus s);

struct VerdictCheck {
  std::string name;
  CheckStatus status;
  std::string detail;
};

struct VerdictConfig {
  double tol = kDefaultBisectionTol;
  double agreement_tol = 1e-8;
  double slope_tol = 0.05;
  std::vector<std::uint64_t> growth_blocks{10000, 100000, 1000000};
  std::uint64_t cover_window = 512;
  std::uint64_t fiber_horizon = 100000;
  double fiber_low = 0.25;
  double fiber_high = 4.0;
  double fiber_quorum = 0.95;
};

struct VerdictReport {
  double predicted = 0.0;
  double closed_form = 0.0;
  double series = 0.0;
  std::vector<VerdictCheck> checks;
  bool passed() const;
};

// Aggregates the formula agreement, growth and tail-cover trends on both
// sides of t*, fiber-sum divergence below t* and the projection inequality.
// Coordinates are relabelled into asymptotic order first.
VerdictReport dimension_verdict(const PowerLawSchedule& sched, const ProductSpace& space,
                                std::span<const std::uint64_t> seeds, const VerdictConfig& config = {});

}  // namespace limsup
