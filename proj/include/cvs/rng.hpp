#pragma once

#include <cstdint>
#include <random>

namespace cvs {

/// SplitMix64 finalizer. Used to derive well-separated seeds from (seed, index) pairs.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Child seed for stream `index` of a parent seed. Distinct indices give distinct seeds.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

// Draws are built directly on the raw 64-bit engine output rather than on the
// std distributions, whose algorithms differ between standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on {0, ..., n-1}; n must be positive.
    std::uint64_t uniform_index(std::uint64_t n) {
        // Rejection sampling on the top of the range keeps the draw unbiased.
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x = engine_();
        while (x >= limit) x = engine_();
        return x % n;
    }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Independent generator for sub-stream `index`.
    Rng split(std::uint64_t index) const { return Rng(derive_seed(seed_, index)); }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace cvs
