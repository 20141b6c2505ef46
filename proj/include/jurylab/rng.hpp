#pragma once

#include <cstdint>
#include <limits>

namespace jurylab {

/// SplitMix64 engine. Cheap to construct, so every replica / voter index can own
/// an independent substream without paying for a large state init.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

inline std::uint64_t mix64(std::uint64_t x) noexcept {
    x ^= x >> 33;
    x *= 0xFF51AFD7ED558CCDULL;
    x ^= x >> 33;
    x *= 0xC4CEB9FE1A85EC53ULL;
    x ^= x >> 33;
    return x;
}

/// Seed for substream `index` of `seed`; depends only on the pair, never on scheduling.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return mix64(mix64(seed) ^ (index * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL));
}

inline SplitMix64 substream(std::uint64_t seed, std::uint64_t index) noexcept {
    return SplitMix64(substream_seed(seed, index));
}

inline SplitMix64 substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
    return SplitMix64(substream_seed(substream_seed(seed, a), b));
}

/// Uniform double in [0, 1) with 53 random bits.
template <class Engine>
double uniform01(Engine& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in (0, 1); safe to feed into a quantile function.
template <class Engine>
double uniform_open01(Engine& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace jurylab
