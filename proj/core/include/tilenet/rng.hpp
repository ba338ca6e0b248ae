#pragma once

#include <cstdint>

namespace tilenet {

// Deterministic 64-bit RNG (splitmix64).  We avoid <random> distributions
// because their outputs are implementation defined; every sampled value in
// the library must be bit-identical across platforms for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [0, n).  n must be > 0.
  std::uint64_t next_below(std::uint64_t n) {
    // Rejection-free scaled multiply; bias is negligible for n << 2^64 and,
    // more importantly, deterministic.
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

// Stable combination of a master seed with a stream index, so parallelizable
// loops (per cell, per window) draw from independent deterministic streams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  Rng r(seed ^ (0x632be59bd9b4e019ULL + stream * 0x9e3779b97f4a7c15ULL));
  return r.next_u64();
}

}  // namespace tilenet
