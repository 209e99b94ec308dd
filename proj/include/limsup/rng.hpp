#pragma once

#include <array>
#include <cstdint>

namespace limsup {

// Counter-based generation (Philox4x32-10). Every draw is addressed by
// (key, substream, domain, index), so any element of any stream can be
// produced without replaying its prefix.

struct PhiloxKey {
  std::uint32_t lo = 0;
  std::uint32_t hi = 0;

  static constexpr PhiloxKey from_seed(std::uint64_t seed) {
    return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  }
  friend constexpr bool operator==(PhiloxKey, PhiloxKey) = default;
};

using PhiloxBlock = std::array<std::uint32_t, 4>;

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

constexpr PhiloxBlock philox4x32_10(PhiloxBlock ctr, PhiloxKey key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key.lo += kPhiloxW0;
      key.hi += kPhiloxW1;
    }
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key.lo, static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key.hi, static_cast<std::uint32_t>(p0)};
  }
  return ctr;
}

// Domain tags keep the experiments' streams disjoint even under a shared seed.
enum class StreamDomain : std::uint32_t {
  generic = 0,
  omega = 0x4F4D4547u,      // "OMEG"
  bernoulli = 0x4245524Eu,  // "BERN"
  sparse = 0x53505253u,     // "SPRS"
};

// Address of one 64-bit draw: index m lives in block m / 2, half m % 2.
struct StreamAddress {
  PhiloxKey key;
  std::uint32_t substream = 0;
  std::uint32_t domain = 0;
};

constexpr std::uint64_t bits_at(const StreamAddress& a, std::uint64_t index) {
  const std::uint64_t block = index >> 1;
  const PhiloxBlock out = philox4x32_10(
      {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32), a.substream, a.domain}, a.key);
  return (index & 1u) ? (static_cast<std::uint64_t>(out[3]) << 32) | out[2]
                      : (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

// Top 53 bits as a double in [0, 1).
constexpr double bits_to_uniform(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// SplitMix64 finalizer; derives per-trial / per-worker seeds from a run seed.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Sequential view over a counter-based stream; a "seeded random stream".
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint32_t substream = 0,
                        StreamDomain domain = StreamDomain::generic)
      : address_{PhiloxKey::from_seed(seed), substream, static_cast<std::uint32_t>(domain)} {}

  std::uint64_t next_bits() { return bits_at(address_, position_++); }
  double next_uniform() { return bits_to_uniform(next_bits()); }

  // Uniform integer in [0, bound) by rejection; bound > 0.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    for (;;) {
      const std::uint64_t b = next_bits();
      if (b < limit) return b % bound;
    }
  }

  const StreamAddress& address() const { return address_; }
  std::uint64_t position() const { return position_; }

 private:
  StreamAddress address_;
  std::uint64_t position_ = 0;
};

}  // namespace limsup
