#pragma once

#include "limsup/simd/kernels.hpp"

namespace limsup::simd::detail {

extern const KernelTable kScalarTable;

void fill_bits_scalar(const StreamAddress& addr, std::uint64_t first, std::size_t count, std::uint64_t* out);
void fill_uniform_scalar(const StreamAddress& addr, std::uint64_t first, std::size_t count, double* out);
void log_svf_scalar(const double* log_r, std::size_t stride, std::size_t dims, const double* s, double t,
                    std::size_t count, double* out);
void exp_scalar(const double* in, std::size_t count, double* out);
void rect_hits_scalar(const double* coords, const double* radii, std::size_t stride, std::size_t dims,
                      const double* anchor, const std::uint8_t* periodic, std::size_t count, std::uint8_t* out);

#if defined(LIMSUP_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif

}  // namespace limsup::simd::detail
