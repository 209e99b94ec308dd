#include <gtest/gtest.h>

#include <cmath>

#include "limsup/errors.hpp"
#include "limsup/montecarlo.hpp"

using namespace limsup;

namespace {

const ProductSpace kTorus = parse_product_space("circle,circle");

// Upper 0.999 quantile of chi-square with 99 degrees of freedom.
constexpr double kChi2_99_999 = 148.23;

double chi_square(const std::vector<int>& counts, double expected) {
  double x = 0.0;
  for (int c : counts) x += (c - expected) * (c - expected) / expected;
  return x;
}

}  // namespace

TEST(Omega, Deterministic) {
  const OmegaStream a(5, kTorus), b(5, kTorus);
  for (std::uint64_t n : {1ull, 2ull, 1000ull, 123456789ull}) EXPECT_EQ(a.at(n), b.at(n));
  EXPECT_NE(a.at(1), OmegaStream(6, kTorus).at(1));
  EXPECT_THROW(a.at(0), DomainError);
}

TEST(Omega, RandomAccessOrder) {
  const OmegaStream a(9, kTorus), b(9, kTorus);
  const auto first = a.at(1);
  const auto late = a.at(1000000);
  EXPECT_EQ(b.at(1000000), late);
  EXPECT_EQ(b.at(1), first);
  EXPECT_EQ(a.coordinate(77, 1), a.at(77)[1]);
}

TEST(Omega, SuccessiveIndicesIndependent) {
  const OmegaStream s(21, parse_product_space("interval"));
  std::vector<int> grid(100, 0);
  const int n = 100000;
  double prev = s.at(1)[0].coord;
  for (int k = 2; k <= n + 1; ++k) {
    const double cur = s.at(k)[0].coord;
    ++grid[int(prev * 10) * 10 + int(cur * 10)];
    prev = cur;
  }
  EXPECT_LT(chi_square(grid, n / 100.0), kChi2_99_999);
}

TEST(Omega, CoordinatesIndependent) {
  const OmegaStream s(22, parse_product_space("interval,circle"));
  std::vector<int> grid(100, 0);
  const int n = 100000;
  for (int k = 1; k <= n; ++k) {
    const auto w = s.at(k);
    ++grid[int(w[0].coord * 10) * 10 + int(w[1].coord * 10)];
  }
  EXPECT_LT(chi_square(grid, n / 100.0), kChi2_99_999);
}

TEST(FiberSum, HarmonicExpectation) {
  const OmegaStream s(3, kTorus);
  const Point anchor[] = {{0.5, 0}};
  const std::uint64_t cps[] = {1000, 100000};
  const FiberSumResult f = fiber_hit_sum(s, PowerLawSchedule({1, 2}), anchor, 0.0, cps);
  // sum of min(2/n, 1)
  double want = 0.0;
  for (int n = 1; n <= 100000; ++n) want += std::min(2.0 / n, 1.0);
  EXPECT_NEAR(f.expectation_exact.back().value, want, 1e-9 * want);
  const double ratio = f.partials.back().value / f.expectation_exact.back().value;
  EXPECT_GE(ratio, 0.25);
  EXPECT_LE(ratio, 4.0);
  EXPECT_LE(f.partials[0].value, f.partials[1].value);
}

TEST(FiberSum, ExpectationIdentityOverStreams) {
  const Point anchor[] = {{0.2, 0}};
  const std::uint64_t cps[] = {40};
  const double u = 0.5;
  const RadiusSchedule sched = PowerLawSchedule({1, 2}, {1, 0.3});
  double mean = 0.0, exact = 0.0;
  const int streams = 1000;
  for (int k = 0; k < streams; ++k) {
    const FiberSumResult f = fiber_hit_sum(OmegaStream(1000 + k, kTorus), sched, anchor, u, cps);
    mean += f.partials[0].value / streams;
    exact = f.expectation_exact[0].value;
  }
  // term n: Bernoulli(mu') times the weight r_{n,2}^u
  double want = 0.0, var = 0.0;
  for (int n = 1; n <= 40; ++n) {
    const double p = std::min(2.0 / n, 1.0);
    const double w = std::pow(0.3 / (double(n) * n), u);
    want += p * w;
    var += w * w * p * (1 - p);
  }
  EXPECT_NEAR(exact, want, 1e-12 * want);
  EXPECT_LE(std::fabs(mean - exact), 3.0 * std::sqrt(var / streams));
}

TEST(FiberSum, LowerCurveDominated) {
  for (std::uint64_t seed : {1ull, 2ull}) {
    const ProductSpace sp = parse_product_space("cantor:1/3,interval,circle");
    const Point anchor[] = {sp.factor(0).center(), {0.1, 0}};
    const std::uint64_t cps[] = {10, 100, 1000};
    const FiberSumResult f = fiber_hit_sum(OmegaStream(seed, sp), PowerLawSchedule({0.5, 1, 2}), anchor, 0.3, cps);
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_GE(f.expectation_exact[i].value, f.expectation_lower[i].value * (1 - 1e-12));
      if (i) {
        EXPECT_GE(f.partials[i].value, f.partials[i - 1].value);
      }
    }
  }
}

TEST(FiberSum, ConvergentCase) {
  const Point anchor[] = {{0.5, 0}};
  const std::uint64_t cps[] = {10000, 100000};
  const FiberSumResult f = fiber_hit_sum(OmegaStream(4, kTorus), PowerLawSchedule({1, 2}), anchor, 1.0, cps);
  ASSERT_GT(f.partials[1].value, 0.0);
  EXPECT_LT((f.partials[1].value - f.partials[0].value) / f.partials[1].value, 0.1);
}

TEST(FiberSum, Errors) {
  const Point anchor[] = {{0.5, 0}};
  const std::uint64_t cps[] = {10};
  const OmegaStream s(1, kTorus);
  EXPECT_THROW(fiber_hit_sum(s, PowerLawSchedule({1, 2}), anchor, 1.5, cps), DomainError);
  EXPECT_THROW(fiber_hit_sum(s, PowerLawSchedule({1, 2}), anchor, -0.1, cps), DomainError);
  EXPECT_THROW(fiber_hit_sum(s, PowerLawSchedule({2, 1}), anchor, 0.5, cps), ContractViolation);
}

TEST(TailBound, Harmonic) {
  std::vector<double> p(10000);
  for (std::size_t n = 0; n < p.size(); ++n) p[n] = 1.0 / double(n + 1);
  const TailBoundTable t = divergence_tail_bound_test(p, 10000, 7);
  ASSERT_EQ(t.entries.size(), 4u);
  EXPECT_EQ(t.entries.back().m, 4u);
  EXPECT_EQ(t.violations(), 0u);
  for (const TailBoundEntry& e : t.entries) EXPECT_LE(e.empirical, e.bound + 3 * e.sigma);
}

TEST(TailBound, DegenerateInputs) {
  const std::vector<double> ones(100, 1.0);
  const TailBoundTable a = divergence_tail_bound_test(ones, 1000, 1);
  EXPECT_EQ(a.entries.size(), 50u);
  for (const TailBoundEntry& e : a.entries) EXPECT_EQ(e.empirical, 0.0);
  const std::vector<double> zeros(100, 0.0);
  EXPECT_TRUE(divergence_tail_bound_test(zeros, 1000, 1).entries.empty());
  EXPECT_THROW(divergence_tail_bound_test(ones, 10, 1), DomainError);
  const std::vector<double> bad{0.5, 1.5};
  EXPECT_THROW(divergence_tail_bound_test(bad, 1000, 1), DomainError);
}

TEST(TailBound, Reproducible) {
  const std::vector<double> p(500, 0.1);
  const TailBoundTable a = divergence_tail_bound_test(p, 2000, 3);
  const TailBoundTable b = divergence_tail_bound_test(p, 2000, 3);
  ASSERT_EQ(a.entries.size(), b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) EXPECT_EQ(a.entries[i].empirical, b.entries[i].empirical);
}

TEST(Density, CircleCells) {
  const DensityReport r = density_check(OmegaStream(8, parse_product_space("circle")), {}, 0.1, 10000);
  EXPECT_EQ(r.cells.size(), 10u);
  EXPECT_GE(r.min_count, 500u);
  EXPECT_TRUE(r.passed);
}

TEST(Density, CantorCylinders) {
  const DensityReport r = density_check(OmegaStream(8, parse_product_space("cantor:1/3")), {}, 1.0 / 27.0, 10000);
  EXPECT_EQ(r.cells.size(), 8u);
  EXPECT_GE(r.min_count, 1u);
  EXPECT_TRUE(r.passed);
}

TEST(Density, EmptyHorizonFails) {
  const DensityReport r = density_check(OmegaStream(8, kTorus), {}, 0.5, 0);
  EXPECT_EQ(r.min_count, 0u);
  EXPECT_FALSE(r.passed);
}

TEST(TailCover, SingleRectangle) {
  const ProductSpace sp = parse_product_space("interval,interval");
  const ExplicitSchedule sched({RadiusTuple({0.4, 0.05})});
  const TailCoverProfile p = tail_cover_sum(OmegaStream(1, sp), sched, 1.5, 1, 1);
  ASSERT_EQ(p.rows.size(), 1u);
  EXPECT_EQ(p.rows[0].radius, 0.05);
  EXPECT_LE(p.rows[0].count, 128.0);
  EXPECT_LE(p.value, 128.0 * std::pow(0.1, 1.5) * (1 + 1e-12));
  EXPECT_NEAR(p.reference, std::pow(2.0, 1.5) * 256.0 * std::sqrt(0.05) * 0.4, 1e-12);
  EXPECT_TRUE(p.dominated());
}

TEST(TailCover, ZeroExponentCountsCovers) {
  const TailCoverProfile p = tail_cover_sum(OmegaStream(2, kTorus), PowerLawSchedule({1, 2}), 0.0, 3, 40);
  double counts = 0.0;
  for (const TailCoverRow& r : p.rows) counts += r.count;
  EXPECT_DOUBLE_EQ(p.value, counts);
  EXPECT_DOUBLE_EQ(p.reference, 256.0 * 38);
}

TEST(TailCover, MonotoneInWindow) {
  const OmegaStream s(5, kTorus);
  double prev = 0.0;
  for (std::uint64_t last : {10ull, 20ull, 80ull}) {
    const TailCoverProfile p = tail_cover_sum(s, PowerLawSchedule({2, 3}), 0.7, 1, last);
    EXPECT_GE(p.value, prev);
    EXPECT_TRUE(p.dominated());
    prev = p.value;
  }
  EXPECT_THROW(tail_cover_sum(s, PowerLawSchedule({2, 3}), 2.5, 1, 3), DomainError);
  EXPECT_THROW(tail_cover_sum(s, PowerLawSchedule({2, 3}), 0.5, 0, 3), DomainError);
}

TEST(Verdict, TorusTwoThree) {
  const std::uint64_t seeds[] = {1, 2, 3};
  const VerdictReport r = dimension_verdict(PowerLawSchedule({2, 3}), kTorus, seeds);
  EXPECT_EQ(r.predicted, 0.5);
  EXPECT_TRUE(r.passed());
  for (const VerdictCheck& c : r.checks) {
    EXPECT_TRUE(c.status == CheckStatus::pass || c.status == CheckStatus::skip) << c.name << ": " << c.detail;
  }
}

TEST(Verdict, ConstantLikeSchedule) {
  const std::uint64_t seeds[] = {1};
  VerdictConfig cfg;
  cfg.fiber_horizon = 1000;
  cfg.cover_window = 64;
  const VerdictReport r = dimension_verdict(PowerLawSchedule({0.25, 0.25}), kTorus, seeds, cfg);
  EXPECT_EQ(r.predicted, 2.0);
}
