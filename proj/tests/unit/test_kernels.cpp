#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <cstring>

#include "limsup/simd/kernels.hpp"
#include "limsup/svf.hpp"

using namespace limsup;
using limsup::simd::Isa;

namespace {

std::int64_t ulp_distance(double a, double b) {
  const auto ia = std::bit_cast<std::int64_t>(a);
  const auto ib = std::bit_cast<std::int64_t>(b);
  return ia > ib ? ia - ib : ib - ia;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

// Lengths that cover full vectors, tails and the empty case.
const std::size_t kLengths[] = {0, 1, 3, 4, 5, 7, 8, 31, 64, 1001};

}  // namespace

TEST(ExpPoly, WithinTwoUlpOfStd) {
  RandomStream rs(11);
  std::int64_t worst = 0;
  for (int i = 0; i < 200000; ++i) {
    const double x = -708.0 + 1416.0 * rs.next_uniform();
    worst = std::max(worst, ulp_distance(simd::exp_poly(x), std::exp(x)));
  }
  for (double x : {0.0, 1.0, -1.0, 0.5, -0.5, 700.0, -700.0, 1e-300, -1e-300}) {
    worst = std::max(worst, ulp_distance(simd::exp_poly(x), std::exp(x)));
  }
  EXPECT_LE(worst, 2);
  EXPECT_EQ(simd::exp_poly(0.0), 1.0);
  EXPECT_EQ(simd::exp_poly(-800.0), 0.0);
}

TEST(Kernels, ScalarAlwaysAvailable) {
  ASSERT_NE(simd::table_for(Isa::scalar), nullptr);
  EXPECT_EQ(simd::table_for(Isa::scalar)->isa, Isa::scalar);
}

class KernelEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    scalar = simd::table_for(Isa::scalar);
    wide = simd::table_for(Isa::avx2);
    if (wide == nullptr) GTEST_SKIP() << "AVX2 variant not available on this build or CPU";
  }
  const simd::KernelTable* scalar = nullptr;
  const simd::KernelTable* wide = nullptr;
};

TEST_F(KernelEquivalence, FillBits) {
  const StreamAddress addr{PhiloxKey::from_seed(77), 2, static_cast<std::uint32_t>(StreamDomain::omega)};
  for (std::size_t n : kLengths) {
    for (std::uint64_t first : {0ull, 1ull, 5ull, (1ull << 33) - 3}) {
      std::vector<std::uint64_t> a(n), b(n);
      scalar->fill_bits(addr, first, n, a.data());
      wide->fill_bits(addr, first, n, b.data());
      ASSERT_EQ(a, b) << "n=" << n << " first=" << first;
      for (std::size_t j = 0; j < n; ++j) ASSERT_EQ(a[j], bits_at(addr, first + j));
    }
  }
}

TEST_F(KernelEquivalence, FillUniform) {
  const StreamAddress addr{PhiloxKey::from_seed(3), 0, 0};
  for (std::size_t n : kLengths) {
    std::vector<double> a(n), b(n);
    scalar->fill_uniform(addr, 9, n, a.data());
    wide->fill_uniform(addr, 9, n, b.data());
    ASSERT_TRUE(same_bits(a, b)) << "n=" << n;
  }
}

TEST_F(KernelEquivalence, Exp) {
  RandomStream rs(5);
  for (std::size_t n : kLengths) {
    std::vector<double> in(n), a(n), b(n);
    for (double& x : in) x = -750.0 + 1450.0 * rs.next_uniform();
    scalar->exp(in.data(), n, a.data());
    wide->exp(in.data(), n, b.data());
    ASSERT_TRUE(same_bits(a, b)) << "n=" << n;
    for (std::size_t j = 0; j < n; ++j) ASSERT_EQ(a[j], simd::exp_poly(in[j]));
  }
}

TEST_F(KernelEquivalence, LogSvf) {
  RandomStream rs(8);
  for (std::size_t dims : {1u, 2u, 3u, 4u}) {
    for (std::size_t n : kLengths) {
      std::vector<double> log_r(dims * n), s(dims), a(n), b(n);
      for (double& v : s) v = 2.0 * rs.next_uniform();
      double total = 0.0;
      for (double v : s) total += v;
      for (double& v : log_r) v = std::log(1e-6 + rs.next_uniform());
      // ties exercise the rank tie-break
      if (n > 2 && dims > 1) log_r[n + 1] = log_r[1];
      for (double t : {0.0, 0.3 * total, 0.77 * total, total}) {
        scalar->log_svf(log_r.data(), n, dims, s.data(), t, n, a.data());
        wide->log_svf(log_r.data(), n, dims, s.data(), t, n, b.data());
        ASSERT_TRUE(same_bits(a, b)) << "dims=" << dims << " n=" << n << " t=" << t;
        for (std::size_t j = 0; j < n; ++j) {
          std::vector<double> r(dims);
          for (std::size_t i = 0; i < dims; ++i) r[i] = std::exp(log_r[i * n + j]);
          const double ref = log_singular_value(RadiusTuple(r), RegularityVector(s), t);
          ASSERT_NEAR(a[j], ref, 1e-9 * (1.0 + std::fabs(ref)));
        }
      }
    }
  }
}

TEST_F(KernelEquivalence, RectHits) {
  RandomStream rs(13);
  for (std::size_t dims : {1u, 2u, 3u}) {
    for (std::size_t n : kLengths) {
      std::vector<double> coords(dims * n), radii(dims * n), anchor(dims);
      std::vector<std::uint8_t> periodic(dims), a(n), b(n);
      for (std::size_t i = 0; i < dims; ++i) {
        anchor[i] = rs.next_uniform();
        periodic[i] = i % 2 == 0;
      }
      for (double& v : coords) v = rs.next_uniform();
      for (double& v : radii) v = 0.6 * rs.next_uniform();
      // a point exactly on the boundary counts (closed rectangles)
      if (n > 0) {
        coords[0] = 0.25;
        anchor[0] = 0.5;
        radii[0] = 0.25;
      }
      scalar->rect_hits(coords.data(), radii.data(), n, dims, anchor.data(), periodic.data(), n, a.data());
      wide->rect_hits(coords.data(), radii.data(), n, dims, anchor.data(), periodic.data(), n, b.data());
      ASSERT_EQ(a, b) << "dims=" << dims << " n=" << n;
      for (std::size_t j = 0; j < n; ++j) {
        bool in = true;
        for (std::size_t i = 0; i < dims; ++i) {
          double d = std::fabs(coords[i * n + j] - anchor[i]);
          if (periodic[i]) d = std::min(d, 1.0 - d);
          in = in && d <= radii[i * n + j];
        }
        ASSERT_EQ(a[j] != 0, in) << "j=" << j;
      }
    }
  }
}

TEST(Kernels, ForceIsaPinsActiveTable) {
  ASSERT_TRUE(simd::force_isa(Isa::scalar));
  EXPECT_EQ(simd::active().isa, Isa::scalar);
  if (simd::table_for(Isa::avx2) != nullptr) {
    ASSERT_TRUE(simd::force_isa(Isa::avx2));
    EXPECT_EQ(simd::active().isa, Isa::avx2);
  }
}
