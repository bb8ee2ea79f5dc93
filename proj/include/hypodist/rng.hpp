#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace hypodist {

struct RngSeed {
    std::uint64_t value = 0;
};

/// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Stream key for an index path: h = mix64(seed); h = mix64(h ^ k) for each k.
/// Streams depend only on (seed, path), never on execution order.
constexpr std::uint64_t derive_stream(RngSeed seed, std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t h = mix64(seed.value);
    for (std::uint64_t k : path)
        h = mix64(h ^ k);
    return h;
}

/// mt19937_64 plus distribution transforms written out explicitly, so draws are
/// identical across standard libraries (std::*_distribution are not).
class Rng {
public:
    explicit Rng(std::uint64_t stream) : engine_(stream) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller; the second variate is cached.
    double normal() noexcept;

    bool coin() noexcept { return (engine_() >> 63) != 0; }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace hypodist
