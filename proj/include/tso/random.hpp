#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <numbers>
#include <random>

namespace tso {

/// Anything that yields uniform [0,1) and standard normal draws. Every
/// stochastic operation in this library documents how many draws it consumes
/// and in which order, so a seeded trajectory can be replayed exactly.
template <typename R>
concept RandomSource = requires(R r) {
    { r.uniform() } -> std::convertible_to<double>;
    { r.normal() } -> std::convertible_to<double>;
};

/// Seedable random stream: the production RandomSource.
///
/// The underlying engine is std::mt19937_64, whose output sequence is fully
/// specified by the standard:
///   - uniform() consumes one engine word
///   - normal()  consumes exactly two engine words (Box-Muller, the second
///               deviate is discarded, no caching)
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform draw in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal draw via Box-Muller: sqrt(-2 ln(1-u1)) * cos(2 pi u2).
    /// u1 = 0 maps to radius 0, so there is no log singularity.
    double normal() {
        const double u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log1p(-u1));
        return radius * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
};

/// One round of the splitmix64 mixer; used for seed derivation.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace tso
