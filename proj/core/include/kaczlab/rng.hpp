/**
 * @file rng.hpp
 * @brief Seedable random stream used by every randomized component.
 *
 * The engine is std::mt19937_64 seeded through a SplitMix64 scramble of the
 * user seed. Independent streams (replicates, noise, initial vectors) derive
 * their seeds with derive_seed(base, stream) so that neighbouring replicate
 * indices do not produce correlated sequences.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace kaczlab {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for stream `stream` of base seed `base`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept;

class Rng {
public:
    using result_type = std::mt19937_64::result_type;

    explicit Rng(std::uint64_t seed);

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01();
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi);
    /// Standard normal.
    double normal();
    /// Uniform integer in [0, n). n must be positive.
    std::size_t index(std::size_t n);

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> gauss_{0.0, 1.0};
};

}  // namespace kaczlab
