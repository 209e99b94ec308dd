#include <gtest/gtest.h>

#include "limsup/ellipsoid.hpp"
#include "limsup/errors.hpp"
#include "limsup/rng.hpp"
#include "oracles.hpp"

using namespace limsup;

TEST(Ellipsoid, PlanarExample) {
  const EllipsoidSchedule e(PowerLawSchedule({2, 3}));
  EXPECT_EQ(e.dilation(), 2.0);
  EXPECT_EQ(convex_body_dimension(e), 0.5);
}

TEST(Ellipsoid, SphericalBodies) {
  for (std::size_t d : {1u, 2u, 3u}) {
    for (double a : {0.2, 0.5, 1.0, 2.5}) {
      const EllipsoidSchedule e(PowerLawSchedule(std::vector<double>(d, a)));
      EXPECT_NEAR(convex_body_dimension(e), std::min(1.0 / a, double(d)), 1e-9) << d << " " << a;
    }
  }
}

TEST(Ellipsoid, DilationInvariant) {
  RandomStream rs(6);
  for (int k = 0; k < 50; ++k) {
    std::vector<double> alphas(3);
    for (double& a : alphas) a = 0.5 + 3 * rs.next_uniform();
    std::sort(alphas.begin(), alphas.end());
    const EllipsoidSchedule e{PowerLawSchedule(alphas)};
    EXPECT_EQ(convex_body_dimension(e), convex_body_dimension(EllipsoidSchedule(e.dilated())));
    EXPECT_EQ(convex_body_dimension(e),
              convex_body_dimension(EllipsoidSchedule(e.semiaxes().scaled(0.1 + rs.next_uniform()))));
  }
}

TEST(Ellipsoid, SandwichMonotone) {
  RandomStream rs(7);
  for (int k = 0; k < 100; ++k) {
    std::vector<double> big(2), small(2);
    for (std::size_t i = 0; i < 2; ++i) {
      big[i] = 0.5 + 3 * rs.next_uniform();
      small[i] = big[i] + rs.next_uniform();
    }
    std::sort(big.begin(), big.end());
    std::sort(small.begin(), small.end());
    // larger exponents mean smaller semiaxes for every n
    if (small[0] < big[0] || small[1] < big[1]) continue;
    const double inner = convex_body_dimension(EllipsoidSchedule(PowerLawSchedule(small)));
    const double outer = convex_body_dimension(EllipsoidSchedule(PowerLawSchedule(big)));
    EXPECT_LE(inner, outer);
  }
}

TEST(Ellipsoid, MatchesSeriesOracle) {
  const std::vector<double> alphas{0.8, 1.1, 2.0};
  const EllipsoidSchedule e{PowerLawSchedule(alphas)};
  EXPECT_NEAR(convex_body_dimension(e), oracle::critical_exponent(alphas, {1, 1, 1}), 1e-9);
}

TEST(Ellipsoid, RejectsIncreasingSemiaxes) {
  EXPECT_THROW(EllipsoidSchedule(PowerLawSchedule({3, 2})), DomainError);
  EXPECT_NO_THROW(EllipsoidSchedule(PowerLawSchedule({2, 2}, {1, 0.5})));
  EXPECT_THROW(EllipsoidSchedule(PowerLawSchedule({2, 2}, {0.5, 1})), DomainError);
}
