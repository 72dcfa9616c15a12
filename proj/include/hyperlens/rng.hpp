#pragma once

// Counter-based random streams. Every (seed, stream) pair names an
// independent deterministic sequence, so sample i can be drawn by whichever
// worker reaches it and the aggregate is identical for any worker count.

#include <cstdint>

namespace hyperlens {

class StreamRng {
 public:
  StreamRng(uint64_t seed, uint64_t stream)
      : state_(mix(mix(seed ^ kSeedSalt) ^ (stream * kGolden + kStreamSalt))) {}

  uint64_t next() {
    state_ += kGolden;
    return mix(state_);
  }

  // Uniform on {0, ..., bound-1}; rejection keeps it unbiased.
  uint64_t next_below(uint64_t bound) {
    const uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      const uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  static constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ull;
  static constexpr uint64_t kSeedSalt = 0x8BB84B93962EACC9ull;
  static constexpr uint64_t kStreamSalt = 0xD1B54A32D192ED03ull;

  static uint64_t mix(uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  uint64_t state_;
};

}  // namespace hyperlens
