#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "sdmlab/analog_frontend.hpp"
#include "sdmlab/spectral_metrics.hpp"

namespace sdmlab {

/// The three output chains under comparison.
enum class Architecture : int {
    classical,   ///< EF modulator at f_H, one NRZ DAC at f_H
    ti_digital,  ///< TI modulator, digital multiplexer, one NRZ DAC at f_H
    analog_mux,  ///< TI modulator, M NRZ DACs at f_L on phase-shifted clocks, analog sum
};

std::string_view to_string(Architecture a);

struct ChainConfig
{
    int order = 2;
    std::size_t M = 4;
    std::size_t samples = 1u << 18;   ///< analysed high-rate samples
    std::size_t warmup = 1024;        ///< samples run before the analysis window (multiple of M)
    std::size_t K = 32;               ///< render cells per T_H
    double amp_dbfs = -3.0;
    JitterSpec jitter;                ///< sigma_tau in seconds; seed is overridden per run
    MetricConfig metric;

    double amplitude() const;
    double t_high() const { return 1.0 / metric.f_high; }
    void validate() const;
};

/// Tone at the bin of `samples` nearest to cfg.metric.signal_freq().
struct InputTone
{
    double amplitude;
    double freq;        ///< Hz, snapped
    double requested;   ///< Hz, before snapping
    std::size_t bin;
};

InputTone make_input_tone(const ChainConfig& cfg);
std::vector<double> make_input(const InputTone& tone, std::size_t samples, double f_high);

struct ChainOutput
{
    AnalogWaveform waveform;
    std::int64_t window_first = 0;  ///< first analysed cell (skips the M-sample pipeline delay)
    std::size_t window_cells = 0;
    BitStream bits;                 ///< the high-rate stream the output represents, aligned to the window
    RunNotes notes;
    InputTone tone;
};

/// Modulate, render and jitter one architecture over warmup + samples input
/// samples. The analysis window covers the last `samples` outputs, shifted by
/// the M-sample pipeline delay for the TI chains, so start-up transients stay
/// outside it. The DAC clocks use seeds derived from `seed`.
ChainOutput run_chain(Architecture arch, const ChainConfig& cfg, std::uint64_t seed);

/// run_chain followed by compute_sndr over the analysed window.
SndrResult chain_sndr(Architecture arch, const ChainConfig& cfg, std::uint64_t seed);

} // namespace sdmlab
