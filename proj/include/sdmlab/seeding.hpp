#pragma once

#include <cstdint>

namespace sdmlab {

/// splitmix64 finalizer. Used to expand one master seed into independent
/// per-stage / per-path seeds: derive_seed(master, stream).
constexpr std::uint64_t splitmix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream)
{
    return splitmix64(splitmix64(master) ^ (stream * 0xd1b54a32d192ed03ULL));
}

/// Stream identifiers for derive_seed. Mux path p uses mux_path_base + p.
namespace seed_stream {
inline constexpr std::uint64_t classical_dac = 1;
inline constexpr std::uint64_t ti_dac = 2;
inline constexpr std::uint64_t mux_common = 3;
inline constexpr std::uint64_t random_input = 4;
inline constexpr std::uint64_t mux_path_base = 1000;
} // namespace seed_stream

} // namespace sdmlab
