#pragma once

// Constants for the Cody-Waite reduced exponential used by every kernel
// variant. exp(x) = 2^n * P(r), n = round(x / ln 2), r = x - n ln 2 with
// |r| <= ln2 / 2 and P the degree-13 Taylor polynomial (truncation < 5e-18).

namespace limsup::simd::detail {

constexpr double kLog2e = 1.4426950408889634074;
constexpr double kLn2Hi = 6.93145751953125E-1;  // exact in 18 bits, so n * kLn2Hi is exact
constexpr double kLn2Lo = 1.42860682030941723212E-6;
constexpr double kExpMin = -708.0;
constexpr double kExpMax = 709.0;
constexpr double kRoundMagic = 0x1.8p52;

// 1/k! for k = 13 down to 0, Horner order.
constexpr double kExpCoeffs[14] = {
    1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0, 1.0 / 362880.0,
    1.0 / 40320.0,      1.0 / 5040.0,      1.0 / 720.0,      1.0 / 120.0,     1.0 / 24.0,
    1.0 / 6.0,          0.5,               1.0,              1.0,
};

}  // namespace limsup::simd::detail
