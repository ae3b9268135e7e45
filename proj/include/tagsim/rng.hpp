#pragma once

#include <cstdint>

namespace tagsim {

/// One mixing step of the splitmix64 generator (Steele, Lea, Flood).
/// Used for seeding and for deriving independent per-run seeds.
inline uint64_t splitmix64_next(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Stateless splitmix64 finalizer of a single value.
inline uint64_t mix64(uint64_t x) {
  uint64_t s = x;
  return splitmix64_next(s);
}

/// Seed for ensemble run `run_index` derived from a base seed:
/// mix64(seed XOR mix64(run_index)). Deterministic and documented so that
/// parallel runs are reproducible from (seed, run_index) alone.
inline uint64_t derive_seed(uint64_t seed, uint64_t run_index) {
  return mix64(seed ^ mix64(run_index));
}

/// xoshiro256++ (Blackman & Vigna, 2019). Fixed algorithm with documented
/// state-advance rules; streams are reproducible bit-for-bit across
/// platforms and implementations.
///
/// State: four 64-bit words filled by successive splitmix64 outputs from the
/// seed. Output: rotl(s0 + s3, 23) + s0, then the standard state transition.
class Rng {
 public:
  explicit Rng(uint64_t seed = 1) { reseed(seed); }

  void reseed(uint64_t seed) {
    uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64_next(sm);
  }

  /// Next raw 64-bit output.
  uint64_t next() {
    const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1): top 53 bits of next() scaled by 2^-53.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). Lemire's multiply-shift bounded draw with
  /// rejection of the biased low range; unbiased for every n >= 1.
  uint64_t below(uint64_t n) {
    uint64_t x = next();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto low = static_cast<uint64_t>(m);
    if (low < n) {
      const uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        x = next();
        m = static_cast<__uint128_t>(x) * n;
        low = static_cast<uint64_t>(m);
      }
    }
    return static_cast<uint64_t>(m >> 64);
  }

  /// True with probability p.
  bool bernoulli(double p) { return uniform01() < p; }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  uint64_t state_[4];
};

}  // namespace tagsim
