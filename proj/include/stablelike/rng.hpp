#pragma once

#include <cstdint>

// Deterministic portable RNG used everywhere in this library.
//
// Generator: xoshiro256++ (Blackman/Vigna), seeded through splitmix64.
// All uniforms are derived from the raw 64-bit output by fixed bit
// arithmetic, never through std::uniform_real_distribution, so a seed
// reproduces the same stream on every platform.

namespace stablelike {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64_next(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0,1), 53 random bits.
    double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0,1]; safe as a log() argument.
    double u01_pos() { return 1.0 - u01(); }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

// Fixed mixing of a base seed with a trial index. Trials get decorrelated
// streams no matter how the base seed was chosen.
inline std::uint64_t seed_for_trial(std::uint64_t base_seed, std::uint64_t trial) {
    std::uint64_t sm = base_seed ^ (0xD1B54A32D192ED03ULL * (trial + 1));
    std::uint64_t a = splitmix64_next(sm);
    std::uint64_t b = splitmix64_next(sm);
    return a ^ (b >> 1);
}

}  // namespace stablelike
