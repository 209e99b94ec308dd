#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <utility>
#include <vector>

#include "exp_poly.hpp"
#include "kernels_internal.hpp"

namespace limsup::simd {

double exp_poly(double x) {
  using namespace detail;
  if (x < kExpMin) return 0.0;
  if (x > kExpMax) x = kExpMax;
  // round-half-even through the magic constant, matching _mm256_round_pd
  const double shifted = x * kLog2e + kRoundMagic;
  const double n = shifted - kRoundMagic;
  const std::int64_t ni = std::bit_cast<std::int64_t>(shifted) - std::bit_cast<std::int64_t>(kRoundMagic);
  const double r = (x - n * kLn2Hi) - n * kLn2Lo;
  double p = kExpCoeffs[0];
  for (int k = 1; k < 14; ++k) p = p * r + kExpCoeffs[k];
  const double scale = std::bit_cast<double>(static_cast<std::uint64_t>(ni + 1023) << 52);
  return p * scale;
}

namespace detail {

void fill_bits_scalar(const StreamAddress& addr, std::uint64_t first, std::size_t count, std::uint64_t* out) {
  for (std::size_t j = 0; j < count; ++j) out[j] = bits_at(addr, first + j);
}

void fill_uniform_scalar(const StreamAddress& addr, std::uint64_t first, std::size_t count, double* out) {
  std::size_t j = 0;
  // whole blocks produce two draws each
  while (j < count) {
    const std::uint64_t index = first + j;
    const std::uint64_t block = index >> 1;
    const PhiloxBlock b = philox4x32_10(
        {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32), addr.substream, addr.domain},
        addr.key);
    const std::uint64_t h0 = (static_cast<std::uint64_t>(b[1]) << 32) | b[0];
    const std::uint64_t h1 = (static_cast<std::uint64_t>(b[3]) << 32) | b[2];
    if ((index & 1u) == 0) {
      out[j++] = bits_to_uniform(h0);
      if (j < count) out[j++] = bits_to_uniform(h1);
    } else {
      out[j++] = bits_to_uniform(h1);
    }
  }
}

void log_svf_scalar(const double* log_r, std::size_t stride, std::size_t dims, const double* s, double t,
                    std::size_t count, double* out) {
  std::vector<std::pair<double, double>> ranked(dims);
  for (std::size_t j = 0; j < count; ++j) {
    for (std::size_t i = 0; i < dims; ++i) ranked[i] = {log_r[i * stride + j], s[i]};
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      return a.first > b.first || (a.first == b.first && a.second > b.second);
    });
    double acc = 0.0;
    double used = 0.0;
    for (const auto& [lr, si] : ranked) {
      const double take = std::min(std::max(t - used, 0.0), si);
      acc = acc + lr * take;
      used = used + si;
    }
    out[j] = acc;
  }
}

void exp_scalar(const double* in, std::size_t count, double* out) {
  for (std::size_t j = 0; j < count; ++j) out[j] = exp_poly(in[j]);
}

void rect_hits_scalar(const double* coords, const double* radii, std::size_t stride, std::size_t dims,
                      const double* anchor, const std::uint8_t* periodic, std::size_t count, std::uint8_t* out) {
  for (std::size_t j = 0; j < count; ++j) {
    std::uint8_t hit = 1;
    for (std::size_t i = 0; i < dims; ++i) {
      double d = std::fabs(coords[i * stride + j] - anchor[i]);
      if (periodic[i]) d = std::min(d, 1.0 - d);
      hit &= static_cast<std::uint8_t>(d <= radii[i * stride + j]);
    }
    out[j] = hit;
  }
}

const KernelTable kScalarTable{Isa::scalar,    fill_bits_scalar, fill_uniform_scalar, log_svf_scalar,
                               exp_scalar,     rect_hits_scalar};

}  // namespace detail
}  // namespace limsup::simd
