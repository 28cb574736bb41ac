#pragma once

#include <array>
#include <cstdint>

namespace nwig {

// Philox4x32-10 counter-based block cipher (Salmon, Moraes, Dror, Shaw,
// "Parallel random numbers: as easy as 1, 2, 3", SC'11).  Maps a 128-bit
// counter and 64-bit key to 128 bits of output through 10 rounds of 32x32
// multiply-hi/lo mixing with Weyl key bumps.  Pure function of its inputs:
// the same (counter, key) gives the same output on every platform, which is
// the foundation of the reproducible sampling contract.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

// Inverse of the standard normal CDF (quantile function), Wichura's
// algorithm AS 241, PPND16 variant: rational minimax approximations on three
// regimes, accurate to about 1e-16 relative for p in (0, 1).  Deterministic
// branch structure (no iteration), hence bit-stable across platforms --
// preferred here over Box-Muller, whose pairing and trigonometry make
// cross-platform reproducibility fragile.  Throws DomainError for p outside
// (0, 1).
double inverse_normal_cdf(double p);

// Deterministic counter-mode sample stream: draw #i is a pure function of
// (seed, i), so any subsequence can be generated independently and in any
// order, and a fixed seed yields a bit-identical stream on every platform.
//
//   uniform01(i) = ((philox(counter=i, key=seed) >> 11) + 0.5) * 2^-53,
//
// a uniform double strictly inside (0, 1); normal(i) maps it through the
// inverse normal CDF.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  double uniform01(std::uint64_t index) const;
  double normal(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
};

}  // namespace nwig
