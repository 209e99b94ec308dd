// Compiled with -mavx2; only reached after a runtime CPU check.

#include <immintrin.h>

#include <array>

#include "exp_poly.hpp"
#include "kernels_internal.hpp"

namespace limsup::simd::detail {
namespace {

struct Words {
  __m256i w0, w1, w2, w3;
};

inline void mulhilo(__m256i a, __m256i m, __m256i& hi, __m256i& lo) {
  const __m256i pe = _mm256_mul_epu32(a, m);
  const __m256i po = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), m);
  lo = _mm256_blend_epi32(pe, _mm256_slli_epi64(po, 32), 0xAA);
  hi = _mm256_blend_epi32(_mm256_srli_epi64(pe, 32), po, 0xAA);
}

// Eight Philox4x32-10 blocks for counters (base + lane, substream, domain).
inline Words philox8(const StreamAddress& addr, std::uint64_t base) {
  alignas(32) std::uint32_t lo[8];
  alignas(32) std::uint32_t hi[8];
  for (int l = 0; l < 8; ++l) {
    const std::uint64_t b = base + static_cast<std::uint64_t>(l);
    lo[l] = static_cast<std::uint32_t>(b);
    hi[l] = static_cast<std::uint32_t>(b >> 32);
  }
  __m256i c0 = _mm256_load_si256(reinterpret_cast<const __m256i*>(lo));
  __m256i c1 = _mm256_load_si256(reinterpret_cast<const __m256i*>(hi));
  __m256i c2 = _mm256_set1_epi32(static_cast<int>(addr.substream));
  __m256i c3 = _mm256_set1_epi32(static_cast<int>(addr.domain));
  __m256i k0 = _mm256_set1_epi32(static_cast<int>(addr.key.lo));
  __m256i k1 = _mm256_set1_epi32(static_cast<int>(addr.key.hi));
  const __m256i m0 = _mm256_set1_epi32(static_cast<int>(kPhiloxM0));
  const __m256i m1 = _mm256_set1_epi32(static_cast<int>(kPhiloxM1));
  const __m256i bump0 = _mm256_set1_epi32(static_cast<int>(kPhiloxW0));
  const __m256i bump1 = _mm256_set1_epi32(static_cast<int>(kPhiloxW1));
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k0 = _mm256_add_epi32(k0, bump0);
      k1 = _mm256_add_epi32(k1, bump1);
    }
    __m256i hi0, lo0, hi1, lo1;
    mulhilo(c0, m0, hi0, lo0);
    mulhilo(c2, m1, hi1, lo1);
    const __m256i n0 = _mm256_xor_si256(_mm256_xor_si256(hi1, c1), k0);
    const __m256i n2 = _mm256_xor_si256(_mm256_xor_si256(hi0, c3), k1);
    c0 = n0;
    c1 = lo1;
    c2 = n2;
    c3 = lo0;
  }
  return {c0, c1, c2, c3};
}

template <class Emit>
inline void for_each_draw(const StreamAddress& addr, std::uint64_t first, std::size_t count, Emit emit) {
  if (count == 0) return;
  const std::uint64_t last = first + count - 1;
  alignas(32) std::uint32_t w[4][8];
  for (std::uint64_t base = first >> 1; base <= (last >> 1); base += 8) {
    const Words words = philox8(addr, base);
    _mm256_store_si256(reinterpret_cast<__m256i*>(w[0]), words.w0);
    _mm256_store_si256(reinterpret_cast<__m256i*>(w[1]), words.w1);
    _mm256_store_si256(reinterpret_cast<__m256i*>(w[2]), words.w2);
    _mm256_store_si256(reinterpret_cast<__m256i*>(w[3]), words.w3);
    for (int l = 0; l < 8; ++l) {
      const std::uint64_t index0 = (base + static_cast<std::uint64_t>(l)) << 1;
      const std::uint64_t h0 = (static_cast<std::uint64_t>(w[1][l]) << 32) | w[0][l];
      const std::uint64_t h1 = (static_cast<std::uint64_t>(w[3][l]) << 32) | w[2][l];
      if (index0 >= first && index0 <= last) emit(index0 - first, h0);
      if (index0 + 1 >= first && index0 + 1 <= last) emit(index0 + 1 - first, h1);
    }
  }
}

void fill_bits_avx2(const StreamAddress& addr, std::uint64_t first, std::size_t count, std::uint64_t* out) {
  for_each_draw(addr, first, count, [out](std::uint64_t j, std::uint64_t bits) { out[j] = bits; });
}

void fill_uniform_avx2(const StreamAddress& addr, std::uint64_t first, std::size_t count, double* out) {
  for_each_draw(addr, first, count, [out](std::uint64_t j, std::uint64_t bits) { out[j] = bits_to_uniform(bits); });
}

struct Lane {
  __m256d l, s;
};

inline void compare_exchange(Lane& a, Lane& b) {
  const __m256d gt = _mm256_cmp_pd(b.l, a.l, _CMP_GT_OQ);
  const __m256d eq = _mm256_cmp_pd(b.l, a.l, _CMP_EQ_OQ);
  const __m256d sgt = _mm256_cmp_pd(b.s, a.s, _CMP_GT_OQ);
  const __m256d swap = _mm256_or_pd(gt, _mm256_and_pd(eq, sgt));
  const Lane na{_mm256_blendv_pd(a.l, b.l, swap), _mm256_blendv_pd(a.s, b.s, swap)};
  const Lane nb{_mm256_blendv_pd(b.l, a.l, swap), _mm256_blendv_pd(b.s, a.s, swap)};
  a = na;
  b = nb;
}

void log_svf_avx2(const double* log_r, std::size_t stride, std::size_t dims, const double* s, double t,
                  std::size_t count, double* out) {
  if (dims == 0 || dims > 4) {
    log_svf_scalar(log_r, stride, dims, s, t, count, out);
    return;
  }
  const __m256d tv = _mm256_set1_pd(t);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= count; j += 4) {
    Lane v[4];
    for (std::size_t i = 0; i < dims; ++i) v[i] = {_mm256_loadu_pd(log_r + i * stride + j), _mm256_set1_pd(s[i])};
    switch (dims) {
      case 2:
        compare_exchange(v[0], v[1]);
        break;
      case 3:
        compare_exchange(v[0], v[1]);
        compare_exchange(v[1], v[2]);
        compare_exchange(v[0], v[1]);
        break;
      case 4:
        compare_exchange(v[0], v[1]);
        compare_exchange(v[2], v[3]);
        compare_exchange(v[0], v[2]);
        compare_exchange(v[1], v[3]);
        compare_exchange(v[1], v[2]);
        break;
      default:
        break;
    }
    __m256d acc = zero;
    __m256d used = zero;
    for (std::size_t i = 0; i < dims; ++i) {
      const __m256d take = _mm256_min_pd(v[i].s, _mm256_max_pd(zero, _mm256_sub_pd(tv, used)));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(v[i].l, take));
      used = _mm256_add_pd(used, v[i].s);
    }
    _mm256_storeu_pd(out + j, acc);
  }
  if (j < count) {
    // column-wise tail: offset the base pointer, keep the stride
    log_svf_scalar(log_r + j, stride, dims, s, t, count - j, out + j);
  }
}

void exp_avx2(const double* in, std::size_t count, double* out) {
  const __m256d lo_limit = _mm256_set1_pd(kExpMin);
  const __m256d hi_limit = _mm256_set1_pd(kExpMax);
  const __m256d log2e = _mm256_set1_pd(kLog2e);
  const __m256d magic = _mm256_set1_pd(kRoundMagic);
  const __m256d ln2hi = _mm256_set1_pd(kLn2Hi);
  const __m256d ln2lo = _mm256_set1_pd(kLn2Lo);
  const __m256i bias = _mm256_set1_epi64x(1023);
  std::size_t j = 0;
  for (; j + 4 <= count; j += 4) {
    __m256d x = _mm256_loadu_pd(in + j);
    const __m256d underflow = _mm256_cmp_pd(x, lo_limit, _CMP_LT_OQ);
    x = _mm256_min_pd(hi_limit, x);
    const __m256d shifted = _mm256_add_pd(_mm256_mul_pd(x, log2e), magic);
    const __m256d n = _mm256_sub_pd(shifted, magic);
    const __m256i ni = _mm256_sub_epi64(_mm256_castpd_si256(shifted), _mm256_castpd_si256(magic));
    const __m256d r = _mm256_sub_pd(_mm256_sub_pd(x, _mm256_mul_pd(n, ln2hi)), _mm256_mul_pd(n, ln2lo));
    __m256d p = _mm256_set1_pd(kExpCoeffs[0]);
    for (int k = 1; k < 14; ++k) p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(kExpCoeffs[k]));
    const __m256d scale = _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_add_epi64(ni, bias), 52));
    const __m256d result = _mm256_andnot_pd(underflow, _mm256_mul_pd(p, scale));
    _mm256_storeu_pd(out + j, result);
  }
  for (; j < count; ++j) out[j] = exp_poly(in[j]);
}

void rect_hits_avx2(const double* coords, const double* radii, std::size_t stride, std::size_t dims,
                    const double* anchor, const std::uint8_t* periodic, std::size_t count, std::uint8_t* out) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t j = 0;
  for (; j + 4 <= count; j += 4) {
    __m256d hit = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
    for (std::size_t i = 0; i < dims; ++i) {
      const __m256d c = _mm256_loadu_pd(coords + i * stride + j);
      __m256d d = _mm256_andnot_pd(sign, _mm256_sub_pd(c, _mm256_set1_pd(anchor[i])));
      if (periodic[i]) d = _mm256_min_pd(_mm256_sub_pd(one, d), d);
      hit = _mm256_and_pd(hit, _mm256_cmp_pd(d, _mm256_loadu_pd(radii + i * stride + j), _CMP_LE_OQ));
    }
    const int bits = _mm256_movemask_pd(hit);
    out[j] = static_cast<std::uint8_t>(bits & 1);
    out[j + 1] = static_cast<std::uint8_t>((bits >> 1) & 1);
    out[j + 2] = static_cast<std::uint8_t>((bits >> 2) & 1);
    out[j + 3] = static_cast<std::uint8_t>((bits >> 3) & 1);
  }
  if (j < count) rect_hits_scalar(coords + j, radii + j, stride, dims, anchor, periodic, count - j, out + j);
}

}  // namespace

const KernelTable kAvx2Table{Isa::avx2, fill_bits_avx2, fill_uniform_avx2, log_svf_avx2, exp_avx2, rect_hits_avx2};

}  // namespace limsup::simd::detail
