#pragma once

#include <cstdint>

namespace dicert {

// SplitMix64: tiny, platform-deterministic, splittable. Streams for one run
// are derived from the run seed by XOR with fixed tags (below), so the
// settings sequence and the two device sides draw from independent streams.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0,1) using the top 53 bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool next_bit() { return (next() >> 63) != 0; }
};

// Stream tags (hex digits of pi; arbitrary fixed distinct constants).
inline constexpr std::uint64_t kStreamSettings = 0x0000000000000000ULL;
inline constexpr std::uint64_t kStreamSideA = 0x243F6A8885A308D3ULL;
inline constexpr std::uint64_t kStreamSideB = 0x13198A2E03707344ULL;

inline SplitMix64 derive_stream(std::uint64_t run_seed, std::uint64_t tag) {
    return SplitMix64(run_seed ^ tag);
}

} // namespace dicert
