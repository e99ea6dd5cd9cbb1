#pragma once

#include <cstdint>

namespace chaoslab {

// splitmix64. Used instead of <random> distributions so that sampled points
// are bit-identical across standard libraries.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t operator()() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    constexpr double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    // Uniform in [0, n). n must be positive.
    constexpr std::uint64_t below(std::uint64_t n) { return (*this)() % n; }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~std::uint64_t{0}; }

private:
    std::uint64_t state_;
};

// Stateless mix of two words; derives per-index seeds and per-coordinate symbols.
constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    SplitMix64 g(a ^ (b * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
    g();
    return g();
}

}  // namespace chaoslab
