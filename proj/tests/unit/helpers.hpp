#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "sdmlab/sdm_core.hpp"

namespace testutil {

inline std::vector<double> uniform(std::size_t n, double amp, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-amp, amp);
    std::vector<double> x(n);
    for (auto& v : x)
        v = d(rng);
    return x;
}

inline sdmlab::BitStream random_bits(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    sdmlab::BitStream y(n);
    for (auto& v : y)
        v = (rng() & 1) ? 1 : -1;
    return y;
}

/// Coherent tone: f snapped to the nearest bin of n samples.
inline std::vector<double> tone(std::size_t n, double amp, double f, double* snapped = nullptr)
{
    const double fb = std::round(f * static_cast<double>(n)) / static_cast<double>(n);
    if (snapped)
        *snapped = fb;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = amp * std::sin(2.0 * std::numbers::pi * fb * static_cast<double>(i));
    return x;
}

} // namespace testutil
