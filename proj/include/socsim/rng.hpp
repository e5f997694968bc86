#pragma once

#include <cstdint>

namespace socsim {

// Splitmix64 finalizer (Steele, Lea & Flood; Vigna's fixed-increment variant).
// Constants are part of the reproducibility contract: traces and CSV outputs
// are bit-stable across platforms as long as these stay fixed.
//   increment  0x9E3779B97F4A7C15
//   mix mul 1  0xBF58476D1CE4E5B9
//   mix mul 2  0x94D049BB133111EB
inline constexpr std::uint64_t kSeedIncrement = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Stateless stream derivation: seed for replication `index` of a batch keyed
// by `base`. mix64 is a bijection and the pre-mix inputs are distinct for
// distinct indices, so derived seeds never collide within a batch.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return mix64(base + (index + 1) * kSeedIncrement);
}

// Small self-contained generator owned by exactly one replication. The
// standard <random> distributions are implementation-defined, so uniform
// doubles and bounded ints are produced here directly.
class RandomStream {
public:
    RandomStream() = default;
    explicit RandomStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += kSeedIncrement;
        return mix64(state_);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n). Multiply-shift reduction; the modulo bias is
    // below 2^-32 for the small n used here and keeps the draw count fixed.
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    bool bernoulli(double p) { return next_double() < p; }

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_ = 0;
};

} // namespace socsim
