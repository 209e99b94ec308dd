#include <gtest/gtest.h>

#include <cmath>

#include "limsup/errors.hpp"
#include "limsup/spaces.hpp"

using namespace limsup;

TEST(Spaces, Constants) {
  const RegularSpace i = RegularSpace::interval(), c = RegularSpace::circle();
  EXPECT_EQ(i.c(), 2.0);
  EXPECT_EQ(i.s(), 1.0);
  EXPECT_EQ(i.diameter(), 1.0);
  EXPECT_EQ(c.diameter(), 0.5);
  const RegularSpace k = RegularSpace::cantor(1.0 / 3.0);
  EXPECT_NEAR(k.s(), std::log(2.0) / std::log(3.0), 1e-15);
  EXPECT_GE(k.c(), 1.0);
  EXPECT_THROW(RegularSpace::cantor(0.5), DomainError);
  EXPECT_THROW(RegularSpace::cantor(0.0), DomainError);
}

TEST(Spaces, Parse) {
  EXPECT_EQ(parse_space("interval").kind(), SpaceKind::interval);
  EXPECT_EQ(parse_space("circle").kind(), SpaceKind::circle);
  EXPECT_EQ(parse_space("cantor:1/3").lambda(), 1.0 / 3.0);
  EXPECT_EQ(parse_space(parse_space("cantor:0.2").descriptor()).lambda(), 0.2);
  EXPECT_THROW(parse_space("cantor:0.6"), DomainError);
  EXPECT_THROW(parse_space("sphere"), DomainError);
  const ProductSpace p = parse_product_space("circle,cantor:1/3");
  EXPECT_EQ(p.dimension(), 2u);
  EXPECT_EQ(parse_product_space(p.descriptor()).descriptor(), p.descriptor());
}

TEST(Spaces, SupportOfSamples) {
  for (const char* d : {"interval", "circle", "cantor:1/3"}) {
    const RegularSpace sp = parse_space(d);
    RandomStream rs(1);
    for (int k = 0; k < 10000; ++k) {
      const Point p = sp.sample(rs);
      ASSERT_GE(p.coord, 0.0);
      ASSERT_LE(p.coord, 1.0);
    }
  }
}

TEST(Spaces, CantorDigitFrequencies) {
  const RegularSpace k = RegularSpace::cantor(1.0 / 3.0);
  RandomStream rs(12);
  std::vector<int> ones(8, 0);
  const int n = 100000;
  for (int j = 0; j < n; ++j) {
    const Point p = k.sample(rs);
    for (int b = 0; b < 8; ++b) ones[b] += (p.digits >> b) & 1;
  }
  for (int b = 0; b < 8; ++b) EXPECT_NEAR(ones[b] / double(n), 0.5, 0.01) << "digit " << b + 1;
}

TEST(Spaces, ProductMeasureOfQuarter) {
  const ProductSpace p = parse_product_space("interval,interval");
  RandomStream rs(3);
  int hits = 0;
  const int n = 100000;
  for (int j = 0; j < n; ++j) {
    const auto x = p.sample(rs);
    hits += x[0].coord <= 0.5 && x[1].coord <= 0.5;
  }
  EXPECT_NEAR(hits / double(n), 0.25, 0.01);
}

TEST(Spaces, BallMeasureExamples) {
  const RegularSpace i = RegularSpace::interval();
  EXPECT_DOUBLE_EQ(i.ball_measure({0.5, 0}, 0.25), 0.5);
  EXPECT_DOUBLE_EQ(i.ball_measure({0.0, 0}, 0.25), 0.25);
  EXPECT_DOUBLE_EQ(RegularSpace::circle().ball_measure({0.9, 0}, 0.75), 1.0);
  EXPECT_DOUBLE_EQ(RegularSpace::circle().ball_measure({0.9, 0}, 0.2), 0.4);
  const RegularSpace k = RegularSpace::cantor(1.0 / 3.0);
  EXPECT_NEAR(k.ball_measure(k.cantor_point(0), 1.0 / 3.0), 0.5, 1e-12);
  EXPECT_THROW(i.ball_measure({0.5, 0}, -1.0), DomainError);
}

TEST(Spaces, AhlforsRegularOnSamples) {
  for (const char* d : {"interval", "circle", "cantor:1/3", "cantor:0.1", "cantor:0.45"}) {
    const RegularSpace sp = parse_space(d);
    RandomStream rs(5);
    for (int k = 0; k < 5000; ++k) {
      const Point x = sp.sample(rs);
      const double r = sp.diameter() * std::pow(2.0, -20.0 * rs.next_uniform());
      const double m = sp.ball_measure(x, r);
      const double rs_ = std::pow(r, sp.s());
      // m is a difference of coordinates, so allow its absolute rounding
      ASSERT_LE(m, sp.c() * rs_ * (1 + 1e-12) + 1e-15) << d << " r=" << r;
      ASSERT_GE(m, rs_ / sp.c() * (1 - 1e-12) - 1e-15) << d << " r=" << r;
    }
  }
}

TEST(Spaces, Distances) {
  const RegularSpace c = RegularSpace::circle();
  EXPECT_NEAR(c.distance({0.1, 0}, {0.9, 0}), 0.2, 1e-15);
  EXPECT_NEAR(RegularSpace::interval().distance({0.1, 0}, {0.9, 0}), 0.8, 1e-15);
  const RegularSpace k = RegularSpace::cantor(1.0 / 3.0);
  EXPECT_NEAR(k.distance(k.cantor_point(0), k.cantor_point(~0ull)), 1.0, 1e-15);
  // digits 1 then 0s vs 0 then 1s: 2/3 vs 1/3
  EXPECT_NEAR(k.distance(k.cantor_point(1), k.cantor_point(~1ull)), 1.0 / 3.0, 1e-15);
  const ProductSpace p = parse_product_space("interval,circle");
  const Point a[] = {{0.1, 0}, {0.05, 0}}, b[] = {{0.2, 0}, {0.95, 0}};
  EXPECT_NEAR(p.distance(a, b), 0.1, 1e-15);
}

TEST(Spaces, CantorEmbedding) {
  const RegularSpace k = RegularSpace::cantor(1.0 / 3.0);
  EXPECT_NEAR(k.cantor_point(1).coord, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(k.cantor_point(~1ull).coord, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(k.center().coord, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(k.mass_below(1.0 / 3.0), 0.5, 1e-12);
  EXPECT_NEAR(k.mass_below(2.0 / 9.0), 0.25, 1e-12);
}

TEST(Spaces, Successor) {
  const RegularSpace k = RegularSpace::cantor(1.0 / 3.0);
  const auto p = k.successor(0.4L);
  ASSERT_TRUE(p.has_value());
  EXPECT_NEAR(p->coord, 2.0 / 3.0, 1e-15);
  EXPECT_FALSE(k.successor(1.5L).has_value());
  const auto q = RegularSpace::interval().successor(0.3L);
  ASSERT_TRUE(q.has_value());
  EXPECT_EQ(q->coord, 0.3);
  const auto w = RegularSpace::circle().successor(1.25L);
  ASSERT_TRUE(w.has_value());
  EXPECT_NEAR(w->coord, 0.25, 1e-15);
}

TEST(Spaces, RectangleMeasureIsProduct) {
  const ProductSpace p = parse_product_space("interval,circle");
  const Point x[] = {{0.5, 0}, {0.0, 0}};
  const double radii[] = {0.1, 0.3};
  EXPECT_NEAR(p.rectangle_measure(x, radii), 0.2 * 0.6, 1e-15);
  const Point y[] = {{0.55, 0}, {0.95, 0}};
  EXPECT_TRUE(p.in_rectangle(x, radii, y));
  const Point z[] = {{0.6, 0}, {0.3, 0}};
  EXPECT_TRUE(p.in_rectangle(x, radii, z));
  const Point w[] = {{0.61, 0}, {0.3, 0}};
  EXPECT_FALSE(p.in_rectangle(x, radii, w));
  EXPECT_EQ(p.cover_constant(), 256.0);
  EXPECT_EQ(p.regularity_constant(), 16.0);
}
