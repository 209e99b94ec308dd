#include "limsup/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "limsup/errors.hpp"
#include "limsup/format.hpp"
#include "limsup/simd/kernels.hpp"
#include "limsup/summation.hpp"

namespace limsup {

namespace {

constexpr std::size_t kChunk = 4096;
constexpr std::size_t kMaxCells = 1u << 20;

void check_checkpoints(std::span<const std::uint64_t> cps) {
  if (cps.empty()) throw ContractViolation("at least one checkpoint is required");
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (cps[i] == 0 || (i > 0 && cps[i] <= cps[i - 1])) {
      throw ContractViolation("checkpoints must be positive and strictly increasing");
    }
  }
}

std::uint64_t low_mask(int k) { return k >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1; }

// Partition of one factor into the cells of a delta-grid.
struct FactorGrid {
  const RegularSpace* space;
  std::size_t cells;
  int level;  // Cantor cylinder depth

  std::size_t index(const Point& p) const {
    if (space->kind() == SpaceKind::cantor) return static_cast<std::size_t>(p.digits & low_mask(level));
    const auto k = static_cast<std::size_t>(p.coord * static_cast<double>(cells));
    return std::min(k, cells - 1);
  }

  Point center(std::size_t k) const {
    if (space->kind() == SpaceKind::cantor) return space->cantor_point(k | ~low_mask(level + 1));
    return Point{(static_cast<double>(k) + 0.5) / static_cast<double>(cells), 0};
  }
};

FactorGrid make_grid(const RegularSpace& space, double delta) {
  if (space.kind() == SpaceKind::cantor) {
    int k = 0;
    while (std::pow(space.lambda(), k) > delta) ++k;
    if (k > 20) throw DomainError("grid scale too fine for a Cantor cylinder net");
    return {&space, std::size_t{1} << k, k};
  }
  const double m = std::ceil(1.0 / delta);
  if (m > static_cast<double>(kMaxCells)) throw DomainError("grid scale too fine");
  return {&space, static_cast<std::size_t>(m), 0};
}

}  // namespace

OmegaStream::OmegaStream(std::uint64_t seed, ProductSpace space)
    : seed_(seed), space_(std::move(space)), key_(PhiloxKey::from_seed(seed)) {}

StreamAddress OmegaStream::address(std::size_t i) const {
  return {key_, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(StreamDomain::omega)};
}

Point OmegaStream::coordinate(std::uint64_t n, std::size_t i) const {
  if (n == 0) throw DomainError("omega is indexed from n = 1");
  return space_.factor(i).from_bits(bits_at(address(i), n));
}

std::vector<Point> OmegaStream::at(std::uint64_t n) const {
  std::vector<Point> p;
  p.reserve(space_.dimension());
  for (std::size_t i = 0; i < space_.dimension(); ++i) p.push_back(coordinate(n, i));
  return p;
}

FiberSumResult fiber_hit_sum(const OmegaStream& stream, const RadiusSchedule& sched, std::span<const Point> anchor,
                             double u, std::span<const std::uint64_t> checkpoints) {
  const ProductSpace& sp = stream.space();
  const std::size_t d = sp.dimension();
  if (schedule_dimension(sched) != d) throw ContractViolation("schedule and space dimensions differ");
  if (anchor.size() + 1 != d) throw ContractViolation("anchor must have d - 1 coordinates");
  const RegularityVector s = sp.regularity();
  if (!(u >= 0.0) || u > s[d - 1]) throw DomainError("u = " + format_double(u) + " outside [0, s_d]");
  check_checkpoints(checkpoints);

  double c = 1.0;
  for (std::size_t i = 0; i + 1 < d; ++i) c /= sp.factor(i).c();
  const double t_lower = s.total() - s[d - 1] + u;

  const simd::KernelTable& k = simd::active();
  std::vector<double> log_r(d * kChunk), radii(d * kChunk), scaled(kChunk), weight(kChunk), lower(kChunk),
      coords(kChunk);
  std::vector<std::uint64_t> bits(kChunk);
  std::vector<std::uint8_t> hit(kChunk), one(kChunk);

  FiberSumResult res;
  res.anchor.assign(anchor.begin(), anchor.end());
  res.u = u;
  CompensatedSum sum, exact, low;
  std::uint64_t hits = 0;
  std::uint64_t n = 1;
  for (std::uint64_t target : checkpoints) {
    while (n <= target) {
      const std::size_t m = static_cast<std::size_t>(std::min<std::uint64_t>(kChunk, target - n + 1));
      fill_log_radii(sched, n, m, log_r.data(), m);
      for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i + 1 < d; ++i) {
          if (log_r[i * m + j] < log_r[(i + 1) * m + j]) {
            throw ContractViolation("radius tuple at n = " + std::to_string(n + j) +
                                    " is not non-increasing; relabel coordinates first");
          }
        }
      }
      k.exp(log_r.data(), d * m, radii.data());
      for (std::size_t j = 0; j < m; ++j) scaled[j] = u * log_r[(d - 1) * m + j];
      k.exp(scaled.data(), m, weight.data());
      k.log_svf(log_r.data(), m, d, s.values().data(), t_lower, m, lower.data());
      k.exp(lower.data(), m, lower.data());

      std::fill(hit.begin(), hit.begin() + m, std::uint8_t{1});
      for (std::size_t i = 0; i + 1 < d; ++i) {
        const RegularSpace& f = sp.factor(i);
        if (f.kind() == SpaceKind::cantor) {
          k.fill_bits(stream.address(i), n, m, bits.data());
          for (std::size_t j = 0; j < m; ++j) {
            if (hit[j] && f.distance(f.cantor_point(bits[j]), anchor[i]) > radii[i * m + j]) hit[j] = 0;
          }
        } else {
          k.fill_uniform(stream.address(i), n, m, coords.data());
          const std::uint8_t periodic = f.periodic() ? 1 : 0;
          k.rect_hits(coords.data(), radii.data() + i * m, m, 1, &anchor[i].coord, &periodic, m, one.data());
          for (std::size_t j = 0; j < m; ++j) hit[j] &= one[j];
        }
      }
      for (std::size_t j = 0; j < m; ++j) {
        if (hit[j]) {
          sum.add(weight[j]);
          ++hits;
        }
        double mass = weight[j];
        for (std::size_t i = 0; i + 1 < d; ++i) mass *= sp.factor(i).ball_measure(anchor[i], radii[i * m + j]);
        exact.add(mass);
        low.add(c * lower[j]);
      }
      n += m;
    }
    res.partials.push_back({target, sum.value()});
    res.expectation_exact.push_back({target, exact.value()});
    res.expectation_lower.push_back({target, low.value()});
    res.hits.push_back(hits);
  }
  return res;
}

std::size_t TailBoundTable::violations() const {
  return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const TailBoundEntry& e) {
    return !e.within();
  }));
}

TailBoundTable divergence_tail_bound_test(std::span<const double> p, std::uint64_t trials, std::uint64_t seed,
                                          std::span<const std::uint64_t> checkpoints) {
  for (double v : p) {
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("expectation " + format_double(v) + " outside [0, 1]");
  }
  if (trials < 1000) throw DomainError("the tail-bound test needs at least 1000 trials");
  std::vector<std::uint64_t> cps(checkpoints.begin(), checkpoints.end());
  if (cps.empty() && !p.empty()) cps.push_back(p.size());
  if (!cps.empty()) check_checkpoints(cps);
  if (!cps.empty() && cps.back() > p.size()) throw ContractViolation("checkpoint beyond the expectation list");

  TailBoundTable table;
  table.trials = trials;
  std::vector<double> expected;
  {
    CompensatedSum e;
    std::size_t i = 0;
    for (std::uint64_t cp : cps) {
      while (i < cp) e.add(p[i++]);
      expected.push_back(e.value());
    }
  }
  std::vector<std::uint64_t> max_m(cps.size());
  bool any = false;
  for (std::size_t c = 0; c < cps.size(); ++c) {
    max_m[c] = static_cast<std::uint64_t>(std::floor(0.5 * expected[c]));
    any = any || max_m[c] >= 1;
  }
  if (!any) return table;

  // at_most[c][m] counts trials with sum <= m at checkpoint c
  std::vector<std::vector<std::uint64_t>> at_most(cps.size());
  for (std::size_t c = 0; c < cps.size(); ++c) at_most[c].assign(max_m[c] + 1, 0);

  const simd::KernelTable& k = simd::active();
  std::vector<double> uni(kChunk);
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    const StreamAddress addr{PhiloxKey::from_seed(mix_seed(seed, trial)), 0,
                             static_cast<std::uint32_t>(StreamDomain::bernoulli)};
    std::uint64_t total = 0;
    std::size_t n = 0;
    for (std::size_t c = 0; c < cps.size(); ++c) {
      while (n < cps[c]) {
        const std::size_t m = std::min<std::size_t>(kChunk, cps[c] - n);
        k.fill_uniform(addr, n, m, uni.data());
        for (std::size_t j = 0; j < m; ++j) total += uni[j] < p[n + j] ? 1 : 0;
        n += m;
      }
      if (total <= max_m[c]) ++at_most[c][total];
    }
  }
  for (std::size_t c = 0; c < cps.size(); ++c) {
    std::uint64_t running = at_most[c][0];
    for (std::uint64_t m = 1; m <= max_m[c]; ++m) {
      running += at_most[c][m];
      TailBoundEntry e;
      e.n = cps[c];
      e.m = m;
      e.empirical = static_cast<double>(running) / static_cast<double>(trials);
      e.bound = 2.0 / static_cast<double>(m);
      const double q = std::min(1.0, e.bound);
      e.sigma = std::sqrt(q * (1.0 - q) / static_cast<double>(trials));
      table.entries.push_back(e);
    }
  }
  return table;
}

DensityReport density_check(const OmegaStream& stream, std::span<const double> radii, double delta,
                            std::uint64_t horizon) {
  if (!(delta > 0.0)) throw DomainError("grid scale must be positive");
  if (!radii.empty() && radii.size() < horizon) throw ContractViolation("radius sequence shorter than the horizon");
  const ProductSpace& sp = stream.space();
  std::vector<FactorGrid> grids;
  std::size_t cells = 1;
  for (const RegularSpace& f : sp.factors()) {
    grids.push_back(make_grid(f, delta));
    cells *= grids.back().cells;
    if (cells > kMaxCells) throw DomainError("grid has too many cells");
  }

  DensityReport rep;
  rep.delta = delta;
  rep.horizon = horizon;
  rep.cells.resize(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    std::size_t rest = c;
    for (std::size_t i = sp.dimension(); i-- > 0;) {
      rep.cells[c].center.insert(rep.cells[c].center.begin(), grids[i].center(rest % grids[i].cells));
      rest /= grids[i].cells;
    }
  }
  const std::uint64_t half = horizon / 2;
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    const std::vector<Point> w = stream.at(n);
    std::size_t c = 0;
    for (std::size_t i = 0; i < sp.dimension(); ++i) c = c * grids[i].cells + grids[i].index(w[i]);
    ++rep.cells[c].count;
    if (n <= half) ++rep.cells[c].count_half;
    if (!radii.empty()) {
      for (DensityCell& cell : rep.cells) {
        if (sp.distance(w, cell.center) <= radii[n - 1]) ++cell.ball_hits;
      }
    }
  }
  rep.min_count = rep.cells.empty() ? 0 : rep.cells.front().count;
  rep.min_count_half = rep.cells.empty() ? 0 : rep.cells.front().count_half;
  for (const DensityCell& cell : rep.cells) {
    rep.min_count = std::min(rep.min_count, cell.count);
    rep.min_count_half = std::min(rep.min_count_half, cell.count_half);
  }
  rep.passed = rep.min_count >= 1 && rep.min_count > rep.min_count_half;
  return rep;
}

TailCoverProfile tail_cover_sum(const OmegaStream& stream, const RadiusSchedule& sched, double t, std::uint64_t first,
                                std::uint64_t last) {
  const ProductSpace& sp = stream.space();
  if (schedule_dimension(sched) != sp.dimension()) throw ContractViolation("schedule and space dimensions differ");
  const RegularityVector s = sp.regularity();
  if (!(t >= 0.0) || t > s.total()) throw DomainError("t = " + format_double(t) + " outside [0, total(s)]");
  if (first == 0 || first > last) throw DomainError("window must satisfy 1 <= N0 <= N1");

  TailCoverProfile prof;
  prof.t = t;
  prof.first = first;
  prof.last = last;
  const double scale = std::pow(2.0, t) * sp.cover_constant();
  CompensatedSum value, reference;
  for (std::uint64_t n = first; n <= last; ++n) {
    const RadiusTuple r = schedule_radii(sched, n);
    const SingularValueProfile svf = svf_profile(r, s);
    const double radius = r[svf.permutation()[svf.piece_of(t)]];
    const std::vector<Point> w = stream.at(n);
    const CoverReport cover = cover_rectangle(sp, w, r, radius);
    TailCoverRow row;
    row.n = n;
    row.radius = radius;
    row.count = cover.count;
    row.bound = cover.bound;
    row.term = cover.count * std::pow(2.0 * radius, t);
    row.reference = scale * svf.value(t);
    value.add(row.term);
    reference.add(row.reference);
    prof.rows.push_back(row);
  }
  prof.value = value.value();
  prof.reference = reference.value();
  return prof;
}

std::string_view status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass:
      return "PASS";
    case CheckStatus::fail:
      return "FAIL";
    case CheckStatus::skip:
      return "SKIP";
    case CheckStatus::inconclusive:
      return "INCONCLUSIVE";
  }
  return "?";
}

bool VerdictReport::passed() const {
  return std::none_of(checks.begin(), checks.end(), [](const VerdictCheck& c) { return c.status == CheckStatus::fail; });
}

namespace {

std::string fmt(double v) { return format_double(v); }

// Cumulative tail-cover values at window ends W/8, W/4, W/2, W.
double cover_trend(const TailCoverProfile& prof) {
  std::vector<double> x, y;
  CompensatedSum acc;
  std::uint64_t next = std::max<std::uint64_t>(1, prof.last / 8);
  for (const TailCoverRow& row : prof.rows) {
    acc.add(row.term);
    if (row.n == next || row.n == prof.last) {
      x.push_back(static_cast<double>(row.n));
      y.push_back(acc.value());
      next *= 2;
    }
  }
  if (x.size() < 2) return 0.0;
  return log_log_slope(x, y);
}

}  // namespace

VerdictReport dimension_verdict(const PowerLawSchedule& sched, const ProductSpace& space,
                                std::span<const std::uint64_t> seeds, const VerdictConfig& config) {
  if (sched.dimension() != space.dimension()) throw ContractViolation("schedule and space dimensions differ");
  const std::vector<std::size_t> order = sched.asymptotic_order();
  const PowerLawSchedule ps = sched.permuted(order);
  const ProductSpace pspace = space.permuted(order);
  const RegularityVector s = pspace.regularity();
  const std::size_t d = ps.dimension();

  VerdictReport rep;
  rep.series = critical_exponent_series(ps, s, config.tol);
  rep.closed_form = closed_form_dimension(ps, s);
  rep.predicted = rep.series;
  {
    const double gap = std::fabs(rep.series - rep.closed_form);
    rep.checks.push_back({"formula-agreement", gap <= config.agreement_tol ? CheckStatus::pass : CheckStatus::fail,
                          "series=" + fmt(rep.series) + " closed_form=" + fmt(rep.closed_form) + " gap=" + fmt(gap)});
  }

  const ExponentProfile prof = exponent_profile(ps, s);
  const double e_total = prof.value(s.total());
  const RadiusSchedule rs = ps;

  // below t*: e = 1/2 (or half of e(total) when that is smaller)
  const double t_lo = prof.inverse(std::min(0.5, 0.5 * e_total));
  const double expect_lo = std::max(0.0, 1.0 - prof.value(t_lo));
  {
    const GrowthEstimate g = estimate_sum_growth(rs, s, t_lo, config.growth_blocks);
    const bool ok = std::fabs(g.slope - expect_lo) <= config.slope_tol;
    rep.checks.push_back({"growth-below", ok ? CheckStatus::pass : CheckStatus::fail,
                          "t=" + fmt(t_lo) + " slope=" + fmt(g.slope) + " expected=" + fmt(expect_lo)});
  }
  std::optional<double> t_hi;
  if (e_total > 1.0) {
    const double level = std::min(1.5, 0.5 * (1.0 + e_total));
    t_hi = prof.inverse(level);
    if (level - 1.0 < 0.25) {
      // sum n^-e with e barely above 1 still grows visibly at every feasible N
      rep.checks.push_back({"growth-above", CheckStatus::inconclusive,
                            "t=" + fmt(*t_hi) + " e=" + fmt(level) + " too close to 1 for a finite-N slope"});
    } else {
      const GrowthEstimate g = estimate_sum_growth(rs, s, *t_hi, config.growth_blocks);
      const bool ok = std::fabs(g.slope) <= config.slope_tol;
      rep.checks.push_back({"growth-above", ok ? CheckStatus::pass : CheckStatus::fail,
                            "t=" + fmt(*t_hi) + " slope=" + fmt(g.slope) + " expected=0"});
    }
  } else {
    rep.checks.push_back({"growth-above", CheckStatus::skip, "t* = total(s): the series diverges for every t"});
  }

  // tail covers around t*
  if (seeds.empty()) {
    rep.checks.push_back({"cover-domination", CheckStatus::skip, "no seeds"});
  } else {
    std::size_t violations = 0;
    double slope_lo = 0.0, slope_hi = 0.0;
    for (std::uint64_t seed : seeds) {
      const OmegaStream stream(seed, pspace);
      const TailCoverProfile lo = tail_cover_sum(stream, rs, t_lo, 1, config.cover_window);
      violations += lo.dominated() ? 0 : 1;
      slope_lo += cover_trend(lo);
      if (t_hi) {
        const TailCoverProfile hi = tail_cover_sum(stream, rs, *t_hi, 1, config.cover_window);
        violations += hi.dominated() ? 0 : 1;
        slope_hi += cover_trend(hi);
      }
    }
    slope_lo /= static_cast<double>(seeds.size());
    slope_hi /= static_cast<double>(seeds.size());
    rep.checks.push_back({"cover-domination", violations == 0 ? CheckStatus::pass : CheckStatus::fail,
                          std::to_string(violations) + " windows above 2^t C sum Phi"});
    const double threshold = 0.5 * expect_lo;
    if (t_hi) {
      const bool ok = slope_hi < threshold && threshold < slope_lo;
      rep.checks.push_back({"cover-trend", ok ? CheckStatus::pass : CheckStatus::fail,
                            "slope_below=" + fmt(slope_lo) + " slope_above=" + fmt(slope_hi) +
                                " threshold=" + fmt(threshold)});
    } else {
      const bool ok = threshold < slope_lo;
      rep.checks.push_back({"cover-trend", ok ? CheckStatus::pass : CheckStatus::fail,
                            "slope_below=" + fmt(slope_lo) + " threshold=" + fmt(threshold)});
    }
  }

  // fiber sums below t* - (s_1 + ... + s_{d-1})
  if (d < 2) {
    rep.checks.push_back({"fiber-divergence", CheckStatus::skip, "one factor: no fiber"});
  } else if (seeds.empty()) {
    rep.checks.push_back({"fiber-divergence", CheckStatus::skip, "no seeds"});
  } else {
    const double head = s.total() - s[d - 1];
    const double room = rep.series - head;
    if (!(room > 0.0)) {
      rep.checks.push_back({"fiber-divergence", CheckStatus::skip, "t* <= s_1 + ... + s_{d-1}"});
    } else {
      const double u = std::min(0.5 * room, s[d - 1]);
      const ProductSpace head_space = pspace.without_last();
      const std::vector<Point> anchor = head_space.center();
      const std::uint64_t cps[] = {std::max<std::uint64_t>(1, config.fiber_horizon / 10), config.fiber_horizon};
      std::size_t conclusive = 0, within = 0, below_lower = 0;
      for (std::uint64_t seed : seeds) {
        const OmegaStream stream(seed, pspace);
        const FiberSumResult f = fiber_hit_sum(stream, rs, anchor, u, cps);
        for (std::size_t i = 0; i < f.partials.size(); ++i) {
          if (f.expectation_exact[i].value < f.expectation_lower[i].value * (1.0 - 1e-12)) ++below_lower;
        }
        if (f.inconclusive()) continue;
        ++conclusive;
        const double ratio = f.partials.back().value / f.expectation_exact.back().value;
        if (ratio >= config.fiber_low && ratio <= config.fiber_high) ++within;
      }
      std::ostringstream detail;
      detail << "u=" << fmt(u) << " within=" << within << "/" << conclusive << " (" << seeds.size() - conclusive
             << " zero-hit) lower-curve violations=" << below_lower;
      CheckStatus st;
      if (below_lower > 0) {
        st = CheckStatus::fail;
      } else if (conclusive == 0) {
        st = CheckStatus::inconclusive;
      } else if (conclusive < 20) {
        st = within == conclusive ? CheckStatus::pass : CheckStatus::fail;
      } else {
        st = static_cast<double>(within) >= config.fiber_quorum * static_cast<double>(conclusive) ? CheckStatus::pass
                                                                                                  : CheckStatus::fail;
      }
      rep.checks.push_back({"fiber-divergence", st, detail.str()});
    }
  }

  if (d >= 2) {
    const double proj = critical_exponent_series(ps.without_last(), s.without_last(), config.tol);
    rep.checks.push_back({"projection", rep.series >= proj ? CheckStatus::pass : CheckStatus::fail,
                          "t*=" + fmt(rep.series) + " t*'=" + fmt(proj)});
  } else {
    rep.checks.push_back({"projection", CheckStatus::skip, "one factor"});
  }
  return rep;
}

}  // namespace limsup
