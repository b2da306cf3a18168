#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

namespace brwre {

// splitmix64 finalizer (Vigna / Steele et al.). This is the documented mixing
// function used to derive every random stream in the library: a stream for a
// task with coordinates (c1, c2, ...) is seeded by folding the coordinates
// into the root seed one word at a time. Folding is order-sensitive, so
// (seed, env, rep) and (seed, rep, env) give unrelated streams.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> words) {
    std::uint64_t h = mix64(seed);
    for (std::uint64_t w : words) h = mix64(h ^ mix64(w));
    return h;
}

inline double uniform_from_bits(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Stateless keyed draw: one uniform in [0,1) fully determined by the key
// words. Used where coupled-seed monotonicity requires that adding particles
// never perturbs the draws of existing ones.
inline double keyed_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                            std::uint64_t c = 0, std::uint64_t d = 0) {
    return uniform_from_bits(derive_seed(seed, {a, b, c, d}));
}

// xoshiro256++ (Blackman & Vigna, public domain reference implementation),
// seeded through splitmix64. Sequential stream for bulk Monte Carlo.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) {
            sm += 0x9e3779b97f4a7c15ull;
            std::uint64_t z = sm;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
            word = z ^ (z >> 31);
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    double uniform01() { return uniform_from_bits(next_u64()); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::array<std::uint64_t, 4> state_{};
};

}  // namespace brwre
