#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference and, where the
// target supports it, an AVX2 variant. Variants are bit-identical on every
// output: reductions stay in scalar code so results do not depend on the ISA
// that happened to be selected at runtime.

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "limsup/rng.hpp"

namespace limsup::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;

  // out[j] = bits_at(addr, first + j).
  void (*fill_bits)(const StreamAddress& addr, std::uint64_t first, std::size_t count, std::uint64_t* out);

  // out[j] = bits_to_uniform(bits_at(addr, first + j)).
  void (*fill_uniform)(const StreamAddress& addr, std::uint64_t first, std::size_t count, double* out);

  // Log of the singular value function for `count` radius tuples stored
  // column-wise: log_r[i * stride + j] is log r_{j,i}. Radii are ranked
  // non-increasingly (ties by larger s first) and the exponent t is loaded
  // greedily: out[j] = sum_k log r_(k) * clamp(t - S_(k-1), 0, s_(k)).
  void (*log_svf)(const double* log_r, std::size_t stride, std::size_t dims, const double* s, double t,
                  std::size_t count, double* out);

  // out[j] = exp(in[j]) via the shared polynomial exponential (<= 2 ulp
  // from std::exp); inputs below -708 flush to zero.
  void (*exp)(const double* in, std::size_t count, double* out);

  // Closed-rectangle membership of points around a fixed anchor:
  // out[j] = 1 iff dist_i(coords[i * stride + j], anchor[i]) <= radii[i * stride + j]
  // for every i < dims. Rows with periodic[i] != 0 use the unit-circle metric.
  void (*rect_hits)(const double* coords, const double* radii, std::size_t stride, std::size_t dims,
                    const double* anchor, const std::uint8_t* periodic, std::size_t count, std::uint8_t* out);
};

// Kernels for the best ISA available on this CPU, unless LIMSUP_SIMD=scalar
// is set in the environment or force_isa() was called.
const KernelTable& active();

// A specific variant; returns nullptr when it was not compiled in or the CPU
// lacks the instructions.
const KernelTable* table_for(Isa isa);

// Pins active() to a variant (tests and benchmarks). Returns false if the
// variant is unavailable.
bool force_isa(Isa isa);

// Scalar polynomial exponential shared by every variant.
double exp_poly(double x);

}  // namespace limsup::simd
