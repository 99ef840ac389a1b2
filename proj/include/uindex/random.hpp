#pragma once

#include <cstdint>

namespace uindex {

constexpr uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic 64-bit generator (xoshiro256**). Output is identical on every
/// platform, unlike the standard distributions.
class Rng {
public:
    explicit Rng(uint64_t seed) {
        for (auto& s : state_) {
            seed = splitmix64(seed);
            s = seed;
        }
    }

    uint64_t next() {
        const uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, bound); bound > 0.
    uint64_t below(uint64_t bound) {
        const uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % bound);
        uint64_t x;
        do x = next();
        while (x >= limit);
        return x % bound;
    }

    /// Uniform in [lo, hi].
    uint64_t between(uint64_t lo, uint64_t hi) { return lo + below(hi - lo + 1); }

    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    static constexpr uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t state_[4];
};

} // namespace uindex
