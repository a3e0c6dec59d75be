#pragma once

// Deterministic RNG for message generation, error injection and benchmark
// trial streams. SplitMix64: the state walks the 64-bit golden ratio and
// outputs pass through a bijective finalizer.
//
// Stream contract (stable across platforms and releases; benchmark output
// depends on it):
//   next()        state += 0x9E3779B97F4A7C15; return mix64(state)
//   next_below(b) next() % b
//   next_double() (next() >> 11) * 2^-53, uniform in [0, 1)
//   derive_stream(seed, k)  mix64(seed + (k + 1) * 0x9E3779B97F4A7C15),
//     the seed of the k-th child stream; nest calls for deeper hierarchies
//     (repetition -> sweep point -> trial).

#include <cstdint>

namespace csam {

inline constexpr uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;

inline constexpr uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline constexpr uint64_t derive_stream(uint64_t seed, uint64_t k) {
    return mix64(seed + (k + 1) * golden_gamma);
}

class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        state_ += golden_gamma;
        return mix64(state_);
    }

    // bound >= 1
    uint64_t next_below(uint64_t bound) { return next() % bound; }

    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

private:
    uint64_t state_;
};

} // namespace csam
