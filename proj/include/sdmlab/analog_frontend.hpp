#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sdmlab/polyphase_ti.hpp"
#include "sdmlab/sdm_core.hpp"

namespace sdmlab {

/// i.i.d. Gaussian deviation of every clock edge.
struct JitterSpec
{
    double sigma_tau = 0.0;   ///< seconds
    std::uint64_t seed = 0;
    bool correlated = false;  ///< mux only: all M path clocks share one deviation per low-rate step

    /// Throws ConfigError unless 0 <= sigma_tau < 0.25 * period.
    void validate(double period) const;
};

/// Rising-edge instants t_n = n * period + phase + tau_n.
struct ClockTrain
{
    double ideal_period = 1.0;
    double phase_offset = 0.0;
    std::vector<double> edge_times;

    double ideal_edge(std::size_t n) const { return static_cast<double>(n) * ideal_period + phase_offset; }
    std::size_t size() const { return edge_times.size(); }
};

ClockTrain make_clock(double period, double phase, const JitterSpec& jitter, std::size_t count);

/// Clock with caller-supplied deviations tau_n (one per edge).
ClockTrain make_clock(double period, double phase, std::span<const double> deviations);

/// The M phase-shifted low-rate clocks of the analog multiplexer: path p has
/// period M * t_high, phase p * t_high and `count` edges. Independent jitter
/// draws a seed per path from jitter.seed; correlated jitter shares one
/// deviation sequence across paths.
std::vector<ClockTrain> make_mux_clocks(std::size_t M, double t_high, std::size_t count, const JitterSpec& jitter);

/// Constant level on [start, end). Waveforms are the sum of their segments.
struct Segment
{
    double start;
    double end;
    double level;
};

/**
 * @brief Piecewise-constant voltage rasterized onto K cells per T_H.
 *
 * samples[i] is the mean of the waveform over cell first_cell + i, i.e. over
 * [(first_cell + i) * dt, (first_cell + i + 1) * dt) with dt = t_high / K.
 * Cell 0 starts at t = 0; jittered edges may extend the grid on either side.
 */
struct AnalogWaveform
{
    std::vector<double> samples;
    std::int64_t first_cell = 0;
    std::size_t cells_per_period = 1; ///< K
    double t_high = 1.0;              ///< T_H in seconds
    std::vector<Segment> segments;

    double cell_width() const { return t_high / static_cast<double>(cells_per_period); }
    double grid_rate() const { return 1.0 / cell_width(); }
    std::int64_t end_cell() const { return first_cell + static_cast<std::int64_t>(samples.size()); }

    /// Value of cell c, zero outside the rendered range.
    double at_cell(std::int64_t c) const;

    /// Cells [first, first + count), zero filled outside the rendered range.
    std::vector<double> window(std::int64_t first, std::size_t count) const;

    /// Integral of the rasterized samples.
    double integral() const;

    /// Integral of the exact segment list.
    double segment_integral() const;
};

/// NRZ rendering: level y(n) from edge n to edge n + 1. Needs |y| + 1 edges.
AnalogWaveform render_nrz(std::span<const Symbol> y, const ClockTrain& clock, std::size_t K);

/// Same, on a grid of K cells per t_high when the clock runs slower than T_H.
AnalogWaveform render_nrz(std::span<const Symbol> y, const ClockTrain& clock, std::size_t K, double t_high);

/// g(t) = 1/M sum_p v_p(t), v_p the NRZ rendering of stream p on clocks[p]
/// (pulses of ideal width T_L = M T_H).
AnalogWaveform analog_mux(const LowRateBank& bank, std::span<const ClockTrain> clocks, std::size_t K);

/// 1/M sum_{k<M} y(n - k), zero prehistory.
std::vector<double> comb_filter(std::span<const double> y, std::size_t M);
std::vector<double> comb_filter(std::span<const Symbol> y, std::size_t M);

struct DtModelReport
{
    double max_abs_diff = 0.0;
    std::size_t compared = 0;
    bool passed = false;
};

/// Ideal-clock analog mux vs comb_filter(ti_multiplex_digital(bank)), sampled at
/// the centre cell of every T_H interval after the first M samples.
DtModelReport dt_model_check(const LowRateBank& bank, std::size_t M, std::size_t K);

} // namespace sdmlab
