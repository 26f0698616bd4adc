#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sdmlab/analog_frontend.hpp"

namespace sdmlab {

/// Band and tone setup shared by the metrics. Frequencies are in Hz with
/// f_high = f_H (1 Hz normalized by default).
struct MetricConfig
{
    int osr = 64;
    double f_high = 1.0;
    double fx_over_band = 0.2;       ///< f_x / B
    std::size_t guard_bins = 3;      ///< bins on each side of the tone counted as signal
    std::size_t psd_segment = 1u << 14;

    /// B = f_H / (2 OSR).
    double band() const { return f_high / (2.0 * osr); }
    double signal_freq() const { return fx_over_band * band(); }

    /// Throws ConfigError unless 0 < f_x < B < f_H / 2.
    void validate() const;
};

/// One-sided Welch estimate. Frequencies in units of f_H; psd is power per
/// unit of normalized frequency so that sum(psd) * resolution is the mean power.
struct SpectrumEstimate
{
    std::vector<double> freqs;
    std::vector<double> psd;
    std::vector<double> psd_db;      ///< 10 log10(psd * resolution), dB per bin
    double resolution = 0.0;
    double sample_rate = 1.0;        ///< units of f_H
    std::size_t segment = 0;
    std::size_t segments = 0;
    std::string window = "hann";
    double overlap = 0.5;

    double integrated_power() const;
    /// Bin nearest to f (units of f_H).
    std::size_t bin_of(double f) const;
};

/// Hann-windowed, 50 % overlapped averaged periodogram. sample_rate is in
/// units of f_H. Needs at least 4 * segment samples.
SpectrumEstimate estimate_psd(std::span<const double> x, double sample_rate, std::size_t segment);
/// Waveform overload: the grid rate K is the sample rate; segment counts grid cells.
SpectrumEstimate estimate_psd(const AnalogWaveform& w, std::size_t segment);

struct SndrResult
{
    double sndr_db = 0.0;
    double signal_power = 0.0;
    double noise_power = 0.0;
    std::size_t signal_bin = 0;
    double snapped_freq = 0.0;       ///< units of f_H
    std::size_t band_bins = 0;
    bool low_confidence = false;     ///< tone not clearly above the in-band floor
};

/**
 * @brief In-band SNDR from a single Hann-windowed FFT.
 *
 * The window keeps the large out-of-band shaped noise from leaking into the
 * band through the record edges. Everything above B is discarded (brick
 * wall). Signal = bins within
 * guard_bins of the tone; noise + distortion = bins 1..B minus the signal
 * bins. DC is never counted. sample_rate is in units of f_H and the input
 * must span at least 2^16 high-rate periods.
 */
SndrResult compute_sndr(std::span<const double> x, double sample_rate, const MetricConfig& cfg);
SndrResult compute_sndr(const AnalogWaveform& w, std::int64_t first_cell, std::size_t cells, const MetricConfig& cfg);

/// Population standard deviation of y(n) - y(n-lag). lag = M gives the step
/// statistics seen by each path DAC of an M-way analog mux.
double measure_sigma_dy(std::span<const double> y, std::size_t lag = 1);
double measure_sigma_dy(std::span<const Symbol> y, std::size_t lag = 1);

/**
 * @brief Jitter-limited SNR of a single-bit NRZ DAC, in dB.
 *
 * A is the tone's peak amplitude, so the signal power is A^2 / 2 against the
 * in-band share (1/OSR) of the white edge error, whose power is
 * (f_s sigma_tau sigma_dy)^2. Returns +inf for sigma_tau == 0.
 */
double predict_snr_jtt1(double amplitude, double f_s, double sigma_tau, double sigma_dy, double osr);

/// Step of an (M+1)-level DAC spanning +-V_S: 2 V_S / M.
double dac_step(std::size_t M, double v_s);

/// Jitter SNR gain of analog multiplexing, 20 log10(M) dB.
double snr_improvement(std::size_t M);

struct CombResponse
{
    double magnitude;
    double magnitude_db;
};

/// |H_C| of the order-M comb at f (units of f_H, 0..0.5). Exact zeros at k/M.
CombResponse comb_response(std::size_t M, double f);

/// Frequency in (0, 1/M) where the comb has dropped by droop_db.
double comb_cutoff(std::size_t M, double droop_db = 3.0103);

/// Smallest OSR keeping comb droop at f = B within max_droop_db.
double min_osr_for_distortion(std::size_t M, double max_droop_db);

enum class Architecture : int;
struct ChainConfig;

struct DrPoint
{
    double amp_dbfs = 0.0;
    double sndr_db = 0.0;
    double digital_sndr_db = 0.0;  ///< SNDR of the jitter-free digital stream
    double sigma_dy = 0.0;         ///< of the digital stream
    double sigma_dy_lag_m = 0.0;   ///< same, at lag M
    bool ok = true;                ///< false when the chain threw; sndr_db is NaN then
    std::string error;
};

struct DrCurve
{
    std::vector<DrPoint> points;
    double peak_sndr_db = 0.0;
    double peak_amp_dbfs = 0.0;
    double dynamic_range_db = 0.0;   ///< span of amplitudes with SNDR > 0 dB
};

/// Summarize sweep points (sorted by amplitude) into a curve.
DrCurve make_dr_curve(std::vector<DrPoint> points);

/// Run the chain once per amplitude. Failures are recorded per point and the sweep continues.
DrCurve dr_sweep(std::span<const double> amplitudes_dbfs, Architecture arch, const ChainConfig& cfg,
                 std::uint64_t seed, std::size_t threads = 1);

} // namespace sdmlab
