// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "limsup/commands.hpp"
#include "limsup/config.hpp"
#include "limsup/covers.hpp"
#include "limsup/dimension.hpp"
#include "limsup/format.hpp"
#include "limsup/montecarlo.hpp"
#include "limsup/rng.hpp"
#include "limsup/schedule.hpp"
#include "limsup/spaces.hpp"
#include "limsup/svf.hpp"
#include "oracles.hpp"

using namespace limsup;

namespace {

// Tolerances and limits.
constexpr double kAgreementTol = 1e-8;
constexpr double kOracleRelTol = 1e-6;
constexpr double kWorkedTol = 1e-8;
constexpr double kFiberLow = 0.25, kFiberHigh = 4.0, kFiberQuorum = 0.95;
constexpr double kConvergentIncrement = 0.1;
constexpr double kSlopeTol = 0.05;

struct Verdict {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

int g_failures = 0;

void criterion(const char* id, double limit_seconds, const std::function<Verdict()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v.fail(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0 && secs > limit_seconds) v.fail("runtime " + format_double(secs) + " s over limit");
  if (!v.ok) ++g_failures;
  std::printf("%s %s %.2fs %s\n", id, v.ok ? "PASS" : "FAIL", secs, v.detail.c_str());
  std::fflush(stdout);
}

std::vector<double> sorted_alphas(RandomStream& rs, std::size_t d) {
  std::vector<double> a(d);
  for (double& x : a) x = 0.5 + 4.5 * rs.next_uniform();
  std::sort(a.begin(), a.end());
  return a;
}

std::vector<double> regularity(RandomStream& rs, std::size_t d) {
  std::vector<double> s(d);
  for (double& x : s) x = 2.0 * (1.0 - rs.next_uniform());  // (0, 2]
  return s;
}

Verdict ac1() {
  Verdict v;
  RandomStream rs(101);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const std::size_t d = 1 + rs.next_below(4);
    std::vector<double> a(d);
    for (double& x : a) x = 0.5 + 4.5 * rs.next_uniform();
    const PowerLawSchedule sched(a);
    const RegularityVector s(regularity(rs, d));
    const double gap = std::fabs(closed_form_dimension(sched, s) - critical_exponent_series(sched, s));
    worst = std::max(worst, gap);
    if (!(gap <= kAgreementTol)) v.fail("schedule " + sched.descriptor() + " gap " + format_double(gap));
  }
  if (v.ok) v.detail = "200 schedules, max gap " + format_double(worst);
  return v;
}

Verdict ac2() {
  Verdict v;
  RandomStream rs(202);
  double worst = 0.0;
  for (int k = 0; k < 500; ++k) {
    const std::size_t d = 1 + rs.next_below(5);
    std::vector<double> r(d), s(d);
    double total = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      r[i] = 1.0 - rs.next_uniform();  // (0, 1]
      s[i] = 2.0 * (1.0 - rs.next_uniform());
      total += s[i];
    }
    const double t = total * rs.next_uniform();
    const double want = std::exp(oracle::log_svf(r, s, t));
    const double got = singular_value(RadiusTuple(r), RegularityVector(s), t);
    const double rel = std::fabs(got - want) / want;
    worst = std::max(worst, rel);
    if (!(rel <= kOracleRelTol)) v.fail("case " + std::to_string(k) + " relative error " + format_double(rel));
  }
  if (v.ok) v.detail = "500 cases, max relative error " + format_double(worst);
  return v;
}

Verdict ac3() {
  Verdict v;
  auto expect = [&](const PowerLawSchedule& sched, const std::vector<double>& s, double want) {
    const RegularityVector rv(s);
    const double series = critical_exponent_series(sched, rv);
    const double closed = closed_form_dimension(sched, rv);
    const double oracle_value = std::min(oracle::critical_exponent(sched.alphas(), s), rv.total());
    for (double got : {series, closed, oracle_value}) {
      if (!(std::fabs(got - want) <= kWorkedTol)) {
        v.fail(sched.descriptor() + " gave " + format_double(got) + ", want " + format_double(want));
      }
    }
  };
  expect(PowerLawSchedule({2, 3}), {1, 1}, 0.5);
  expect(PowerLawSchedule({1, 2}), {1, 1}, 1.0);
  int cases = 2;
  for (double a : {0.25, 0.5, 0.9, 1.0, 1.5, 2.0, 3.0, 5.0}) {
    for (double s : {0.3, 0.6309297535714574, 1.0, 2.0}) {
      expect(PowerLawSchedule({a}), {s}, std::min(1.0 / a, s));
      ++cases;
    }
  }
  if (v.ok) v.detail = std::to_string(cases) + " worked values";
  return v;
}

Verdict ac4() {
  Verdict v;
  std::size_t checked = 0;
  const char* kinds[] = {"interval", "circle", "cantor:1/3"};
  for (const char* desc : kinds) {
    const RegularSpace sp = parse_space(desc);
    const ProductSpace single({sp});
    RandomStream rs(404, 0, StreamDomain::sparse);
    for (int k = 1; k <= 8; ++k) {
      const double r = std::ldexp(1.0, -k);
      for (int trial = 0; trial < 3; ++trial) {
        const Point x = sp.sample(rs);
        const double R = std::min(1.0, 2.0 * r * (1.0 + 7.0 * rs.next_uniform()));
        const std::string where = std::string(desc) + " k=" + std::to_string(k) + " R=" + format_double(R);
        for (RandomStream* order : {static_cast<RandomStream*>(nullptr), &rs}) {
          const std::vector<Point> a = max_sparse_subset(sp, x, R, r, order);
          const SparseBounds b = sparse_count_bounds(sp, R, r);
          if (!is_sparse(sp, a, r)) v.fail(where + ": sparse set has a close pair");
          if (!(max_probe_gap(sp, a, x, R, r) < r)) v.fail(where + ": sparse set not maximal on the probe net");
          if (double(a.size()) < b.lower || double(a.size()) > b.upper) {
            v.fail(where + ": sparse count " + std::to_string(a.size()) + " outside bounds");
          }
          ++checked;
        }
        const CoverReport ball = cover_ball(sp, x, R, r);
        const double radius[] = {R};
        const Point center[] = {x};
        const CoverCheck bc = verify_cover(single, ball, center, radius);
        if (!(ball.count <= ball.bound)) v.fail(where + ": ball cover count over bound");
        if (!bc.covered) v.fail(where + ": ball cover misses " + std::to_string(bc.uncovered) + " probes");
        ++checked;
      }
    }
  }
  const ProductSpace prod = parse_product_space("interval,circle,cantor:1/3");
  RandomStream rs(405);
  for (int k = 1; k <= 8; ++k) {
    const double r = std::ldexp(1.0, -k);
    for (int trial = 0; trial < 3; ++trial) {
      const std::vector<Point> x = prod.sample(rs);
      std::vector<double> radii(3);
      for (double& q : radii) q = std::min(1.0, r * std::ldexp(1.0, int(rs.next_below(6)) - 1) * (1 + rs.next_uniform()));
      std::sort(radii.begin(), radii.end(), std::greater<>());
      const CoverReport cover = cover_rectangle(prod, x, RadiusTuple(radii), r);
      const CoverCheck cc = verify_cover(prod, cover, x, radii);
      const std::string where = "rectangle k=" + std::to_string(k);
      if (!(cover.count <= cover.bound)) v.fail(where + ": count over bound");
      if (!cc.covered) v.fail(where + ": cover misses " + std::to_string(cc.uncovered) + " probes");
      ++checked;
    }
  }
  if (v.ok) v.detail = std::to_string(checked) + " sets and covers, zero violations";
  return v;
}

Verdict ac5() {
  Verdict v;
  std::vector<double> p(10000);
  for (std::size_t n = 0; n < p.size(); ++n) p[n] = 1.0 / double(n + 1);
  const TailBoundTable t = divergence_tail_bound_test(p, 10000, 505);
  if (t.entries.empty()) v.fail("no admissible M");
  for (const TailBoundEntry& e : t.entries) {
    if (!e.within()) {
      v.fail("M=" + std::to_string(e.m) + " empirical " + format_double(e.empirical) + " > " +
             format_double(e.bound + 3 * e.sigma));
    }
  }
  if (v.ok) v.detail = std::to_string(t.entries.size()) + " values of M within 2/M + 3 sigma";
  return v;
}

Verdict ac6() {
  Verdict v;
  const ProductSpace torus = parse_product_space("circle,circle");
  const PowerLawSchedule sched({1, 2});
  const Point anchor[] = {{0.5, 0}};
  const std::uint64_t at[] = {100000};
  int inside = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const FiberSumResult f = fiber_hit_sum(OmegaStream(seed, torus), sched, anchor, 0.0, at);
    const double ratio = f.partials[0].value / f.expectation_exact[0].value;
    if (ratio >= kFiberLow && ratio <= kFiberHigh) ++inside;
  }
  if (inside < kFiberQuorum * 100) v.fail("divergent case: " + std::to_string(inside) + "/100 seeds in band");

  // u = 1: e(s_1 + u) = e(2) = 3 > 1
  const std::uint64_t cps[] = {10000, 100000};
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const FiberSumResult f = fiber_hit_sum(OmegaStream(seed, torus), sched, anchor, 1.0, cps);
    const double total = f.partials[1].value;
    const double rel = total > 0 ? (total - f.partials[0].value) / total : 0.0;
    worst = std::max(worst, rel);
  }
  if (!(worst < kConvergentIncrement)) v.fail("convergent case: increment " + format_double(worst));
  if (v.ok) {
    v.detail = std::to_string(inside) + "/100 seeds in band; convergent increment " + format_double(worst);
  }
  return v;
}

Verdict ac7() {
  Verdict v;
  const ProductSpace torus = parse_product_space("circle,circle");
  const RegularityVector s({1, 1});
  const std::vector<PowerLawSchedule> schedules{PowerLawSchedule({2, 3}), PowerLawSchedule({1, 2})};
  const std::uint64_t windows[][2] = {{1, 64}, {65, 256}, {257, 512}};
  const std::uint64_t blocks[] = {100000, 200000, 500000, 1000000};
  std::size_t probed = 0;
  double worst_slope = 0.0;
  for (const PowerLawSchedule& sched : schedules) {
    const ExponentProfile e = exponent_profile(sched, s);
    for (int k = 0; k < 10; ++k) {
      const double t = s.total() * k / 9.0;
      for (const auto& w : windows) {
        for (std::uint64_t seed : {1ull, 2ull}) {
          const TailCoverProfile p = tail_cover_sum(OmegaStream(seed, torus), sched, t, w[0], w[1]);
          if (!p.dominated()) {
            v.fail(sched.descriptor() + " t=" + format_double(t) + " window " + std::to_string(w[0]) + ".." +
                   std::to_string(w[1]) + ": " + format_double(p.value) + " > " + format_double(p.reference));
          }
          ++probed;
        }
      }
      const double want = std::max(0.0, 1.0 - e.value(t));
      const double got = estimate_sum_growth(sched, s, t, blocks).slope;
      worst_slope = std::max(worst_slope, std::fabs(got - want));
      if (!(std::fabs(got - want) <= kSlopeTol)) {
        v.fail(sched.descriptor() + " t=" + format_double(t) + ": growth slope " + format_double(got) + ", want " +
               format_double(want));
      }
    }
  }
  if (v.ok) {
    v.detail = std::to_string(probed) + " tail covers dominated; max slope error " + format_double(worst_slope);
  }
  return v;
}

Verdict ac8() {
  Verdict v;
  RandomStream rs(808);
  int cases = 0;
  auto check = [&](const PowerLawSchedule& full, const std::vector<double>& s) {
    const RegularityVector rv(s);
    const RegularityVector rp(std::vector<double>(s.begin(), s.end() - 1));
    const PowerLawSchedule proj = full.without_last();
    const double a = critical_exponent_series(full, rv), b = critical_exponent_series(proj, rp);
    const double ca = closed_form_dimension(full, rv), cb = closed_form_dimension(proj, rp);
    if (!(a >= b)) v.fail(full.descriptor() + ": series " + format_double(a) + " < " + format_double(b));
    if (!(ca >= cb)) v.fail(full.descriptor() + ": closed form " + format_double(ca) + " < " + format_double(cb));
    ++cases;
  };
  check(PowerLawSchedule({2, 3}), {1, 1});
  check(PowerLawSchedule({1, 2}), {1, 1});
  for (int k = 0; k < 300; ++k) {
    const std::size_t d = 2 + rs.next_below(3);
    check(PowerLawSchedule(sorted_alphas(rs, d)), regularity(rs, d));
  }
  if (v.ok) v.detail = std::to_string(cases) + " schedules";
  return v;
}

Verdict ac9() {
  Verdict v;
  const char* bodies[] = {
      "command = svf eval\nr = 0.5,0.25\ns = 1,1\nt = 0,0.5,1.5\n",
      "command = dim predict\nschedule = power:alphas=2,3\n",
      "command = sparse\nspace = cantor:1/3\ncenter = 0\nradius = 1\nspacing = 0.01\nseed = 4\n",
      "command = cover rect\nspace = interval,circle\ncenter = 0.3,0.9\nradii = 0.2,0.05\nspacing = 0.01\n",
      "command = mc fiber-sum\nspace = circle,circle\nschedule = power:alphas=1,2\nu = 0,0.5\n"
      "checkpoints = 1000,10000\nseed = 9\n",
      "command = mc divergence\nexpectations = harmonic:2000\ntrials = 1000\nseed = 3\n",
      "command = mc density\nspace = circle,cantor:1/3\ndelta = 0.2\nhorizon = 2000\nseed = 6\n",
      "command = mc tail-cover\nspace = circle,circle\nschedule = power:alphas=1,2\nt = 0.5,1.5\n"
      "window = 1,128\nseed = 2\n",
  };
  for (const char* body : bodies) {
    const RunConfig c = parse_config(std::string("version = 1\n") + body);
    const std::string line = manifest_record(c, run(c), 0.0, "1970-01-01T00:00:00Z");
    const ReplayOutcome first = replay(line), second = replay(line);
    if (first.status != kExitPass || second.status != kExitPass || first.rerun.csv != second.rerun.csv ||
        first.rerun.csv != first.recorded_csv) {
      v.fail(std::string("replay of '") + c.command() + "' not byte-identical");
    }
  }
  if (v.ok) v.detail = std::to_string(std::size(bodies)) + " manifests replayed twice";
  return v;
}

}  // namespace

int main() {
  criterion("AC1", 5, ac1);
  criterion("AC2", 30, ac2);
  criterion("AC3", 0, ac3);
  criterion("AC4", 60, ac4);
  criterion("AC5", 60, ac5);
  criterion("AC6", 300, ac6);
  criterion("AC7", 120, ac7);
  criterion("AC8", 0, ac8);
  criterion("AC9", 0, ac9);
  return g_failures == 0 ? 0 : 1;
}
