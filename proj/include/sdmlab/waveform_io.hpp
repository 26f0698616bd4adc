#pragma once

#include <cstdint>
#include <iosfwd>

#include "sdmlab/analog_frontend.hpp"

namespace sdmlab {

/// Run parameters recorded in a waveform dump header.
struct WaveformHeader
{
    std::size_t K = 32;
    double f_high = 1.0;
    std::size_t M = 1;
    double sigma_tau = 0.0;
    std::uint64_t seed = 0;
};

/**
 * Writes cells [first, first + count) of w as CSV:
 *
 *     # sdmlab waveform
 *     # K=32
 *     # f_H=1
 *     # M=4
 *     # sigma_tau=0.015
 *     # seed=7
 *     grid_index,value
 *     0,1
 *     ...
 *
 * Values use 17 significant digits so they read back exactly.
 */
void write_waveform_csv(std::ostream& os, const AnalogWaveform& w, const WaveformHeader& header, std::int64_t first,
                        std::size_t count);

struct WaveformDump
{
    WaveformHeader header;
    std::vector<std::int64_t> grid_index;
    std::vector<double> value;
};

/// Parse the format above. Throws ArgumentError on malformed input.
WaveformDump read_waveform_csv(std::istream& is);

} // namespace sdmlab
