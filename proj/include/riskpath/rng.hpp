#pragma once

#include <cstdint>
#include <random>

namespace riskpath {

/// SplitMix64 finaliser; used to derive independent per-episode seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Seed for episode `index` of sweep level `level`.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t level,
                                    std::uint64_t index) noexcept {
    return splitmix64(splitmix64(splitmix64(base) ^ level) ^ index);
}

/// Deterministic random stream. The engine is std::mt19937_64 (fully
/// specified by the standard); the conversions below are our own so results
/// do not depend on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = std::uint64_t(-1) - (std::uint64_t(-1) % n);
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace riskpath
