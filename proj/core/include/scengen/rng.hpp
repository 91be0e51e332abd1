#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace scengen {

// Seed derivation and value generation used everywhere randomness appears.
// std::uniform_real_distribution is implementation-defined, so suites would
// not be reproducible across standard libraries; this generator is fully
// specified and gives bit-identical streams on every platform.

// splitmix64 finalizer (Vigna). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Order-sensitive combination of seed components, e.g.
// derive_seed({master, cell_index, repetition}).
constexpr std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0x8000000000000001ULL;
    for (std::uint64_t p : parts) h = mix64(h ^ p);
    return h;
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Tag strings participate in seed derivation via their FNV hash.
constexpr std::uint64_t seed_tag(std::string_view s) { return fnv1a64(s); }

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53-bit resolution.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi). lo is attainable, hi is not.
    double next_in(double lo, double hi) { return lo + next_unit() * (hi - lo); }

    // Uniform integer in [0, n). n must be > 0.
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

private:
    std::uint64_t state_;
};

}  // namespace scengen
