#include "sdmlab/spectral_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "fft.hpp"
#include "sdmlab/errors.hpp"

namespace sdmlab {

namespace {

// sin(pi x), exactly zero at integers.
double sin_pi(double x)
{
    const double r = x - 2.0 * std::round(0.5 * x); // r in [-1, 1]
    if (r == 0.0 || std::abs(r) == 1.0)
        return 0.0;
    return std::sin(std::numbers::pi * r);
}

std::vector<double> periodic_hann(std::size_t n)
{
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
    return w;
}

} // namespace

void MetricConfig::validate() const
{
    if (osr < 1)
        throw ConfigError("OSR must be >= 1");
    if (!(f_high > 0.0))
        throw ConfigError("f_H must be > 0");
    const double b = band();
    const double fx = signal_freq();
    if (!(fx > 0.0 && fx < b))
        throw ConfigError("signal frequency must lie in (0, B)");
    if (!(b < 0.5 * f_high))
        throw ConfigError("band B must be below f_H / 2");
    if (psd_segment < 16)
        throw ConfigError("PSD segment must be >= 16 samples");
}

double SpectrumEstimate::integrated_power() const
{
    return std::accumulate(psd.begin(), psd.end(), 0.0) * resolution;
}

std::size_t SpectrumEstimate::bin_of(double f) const
{
    const auto k = static_cast<std::size_t>(std::llround(std::max(f, 0.0) / resolution));
    return std::min(k, freqs.empty() ? 0 : freqs.size() - 1);
}

SpectrumEstimate estimate_psd(std::span<const double> x, double sample_rate, std::size_t segment)
{
    if (segment < 16 || segment % 2 != 0)
        throw ArgumentError("estimate_psd: segment must be even and >= 16");
    if (x.size() < 4 * segment)
        throw ArgumentError("estimate_psd: need at least 4 segments (" + std::to_string(4 * segment) +
                            " samples), got " + std::to_string(x.size()));

    const auto w = periodic_hann(segment);
    const double wpow = std::inner_product(w.begin(), w.end(), w.begin(), 0.0);
    const std::size_t hop = segment / 2;
    const std::size_t count = (x.size() - segment) / hop + 1;
    const std::size_t bins = segment / 2 + 1;

    SpectrumEstimate est;
    est.sample_rate = sample_rate;
    est.segment = segment;
    est.segments = count;
    est.resolution = sample_rate / static_cast<double>(segment);
    est.psd.assign(bins, 0.0);

    std::vector<double> buf(segment);
    std::vector<std::complex<double>> spec;
    for (std::size_t s = 0; s < count; ++s) {
        const double* seg = x.data() + s * hop;
        for (std::size_t i = 0; i < segment; ++i)
            buf[i] = seg[i] * w[i];
        detail::rfft(buf, spec);
        for (std::size_t k = 0; k < bins; ++k)
            est.psd[k] += std::norm(spec[k]);
    }

    // |X_k|^2 / (N * sum w^2) per segment is power per bin (two-sided);
    // fold negative frequencies, then divide by the bin width for a density.
    const double scale = 1.0 / (static_cast<double>(count) * static_cast<double>(segment) * wpow * est.resolution);
    est.freqs.resize(bins);
    est.psd_db.resize(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        const bool edge = k == 0 || k == bins - 1;
        est.psd[k] *= scale * (edge ? 1.0 : 2.0);
        est.freqs[k] = static_cast<double>(k) * est.resolution;
        est.psd_db[k] = 10.0 * std::log10(std::max(est.psd[k] * est.resolution, 1e-300));
    }
    return est;
}

SpectrumEstimate estimate_psd(const AnalogWaveform& w, std::size_t segment)
{
    return estimate_psd(w.samples, static_cast<double>(w.cells_per_period), segment);
}

SndrResult compute_sndr(std::span<const double> x, double sample_rate, const MetricConfig& cfg)
{
    cfg.validate();
    const double periods = static_cast<double>(x.size()) / sample_rate;
    if (periods < 65536.0)
        throw ArgumentError("compute_sndr: input spans " + std::to_string(periods) +
                            " high-rate periods, need at least 2^16");

    const std::size_t n = x.size();
    const auto w = periodic_hann(n);
    const double wpow = std::inner_product(w.begin(), w.end(), w.begin(), 0.0);
    std::vector<double> xw(n);
    for (std::size_t i = 0; i < n; ++i)
        xw[i] = x[i] * w[i];
    const auto spec = detail::rfft(xw);
    const double bin_hz = sample_rate * cfg.f_high / static_cast<double>(n);
    auto power = [&](std::size_t k) {
        // one-sided power in bin k; a tone's power is the sum over its main lobe
        return 2.0 * std::norm(spec[k]) / (static_cast<double>(n) * wpow);
    };

    SndrResult r;
    r.band_bins = static_cast<std::size_t>(std::floor(cfg.band() / bin_hz));
    r.signal_bin = static_cast<std::size_t>(std::llround(cfg.signal_freq() / bin_hz));
    r.snapped_freq = static_cast<double>(r.signal_bin) * bin_hz / cfg.f_high;
    if (r.signal_bin == 0 || r.signal_bin > r.band_bins)
        throw ConfigError("compute_sndr: signal bin outside (0, B]");

    const std::size_t g = cfg.guard_bins;
    const std::size_t lo = r.signal_bin > g ? r.signal_bin - g : 1;
    const std::size_t hi = std::min(r.signal_bin + g, r.band_bins);

    std::size_t noise_bins = 0;
    for (std::size_t k = 1; k <= r.band_bins; ++k) {
        if (k >= lo && k <= hi) {
            r.signal_power += power(k);
        } else {
            r.noise_power += power(k);
            ++noise_bins;
        }
    }
    r.sndr_db = 10.0 * std::log10(r.signal_power / r.noise_power);

    // Signal window should carry at least 10x what the average noise bin would put there.
    const double floor_per_bin = noise_bins ? r.noise_power / static_cast<double>(noise_bins) : 0.0;
    r.low_confidence = !(r.signal_power > 10.0 * floor_per_bin * static_cast<double>(hi - lo + 1));
    return r;
}

SndrResult compute_sndr(const AnalogWaveform& w, std::int64_t first_cell, std::size_t cells, const MetricConfig& cfg)
{
    const auto x = w.window(first_cell, cells);
    return compute_sndr(x, static_cast<double>(w.cells_per_period), cfg);
}

double measure_sigma_dy(std::span<const double> y, std::size_t lag)
{
    if (lag < 1)
        throw ArgumentError("measure_sigma_dy: lag must be >= 1");
    if (y.size() < lag + 1)
        throw ArgumentError("measure_sigma_dy: need more than lag samples");
    const std::size_t m = y.size() - lag;
    double mean = 0.0;
    for (std::size_t n = lag; n < y.size(); ++n)
        mean += y[n] - y[n - lag];
    mean /= static_cast<double>(m);
    double var = 0.0;
    for (std::size_t n = lag; n < y.size(); ++n) {
        const double d = (y[n] - y[n - lag]) - mean;
        var += d * d;
    }
    return std::sqrt(var / static_cast<double>(m));
}

double measure_sigma_dy(std::span<const Symbol> y, std::size_t lag)
{
    const auto r = to_real(y);
    return measure_sigma_dy(std::span<const double>(r), lag);
}

double predict_snr_jtt1(double amplitude, double f_s, double sigma_tau, double sigma_dy, double osr)
{
    if (sigma_tau == 0.0)
        return std::numeric_limits<double>::infinity();
    if (!(amplitude > 0.0 && f_s > 0.0 && sigma_tau > 0.0 && sigma_dy > 0.0 && osr > 0.0))
        throw ArgumentError("predict_snr_jtt1: all arguments must be positive");
    const double ratio = amplitude / (f_s * sigma_tau * sigma_dy);
    return 10.0 * std::log10(0.5 * ratio * ratio * osr);
}

double dac_step(std::size_t M, double v_s)
{
    if (M < 1 || !(v_s > 0.0))
        throw ArgumentError("dac_step: need M >= 1 and V_S > 0");
    return 2.0 * v_s / static_cast<double>(M);
}

double snr_improvement(std::size_t M)
{
    if (M < 1)
        throw ArgumentError("snr_improvement: M must be >= 1");
    return 20.0 * std::log10(static_cast<double>(M));
}

CombResponse comb_response(std::size_t M, double f)
{
    if (M < 1)
        throw ArgumentError("comb_response: M must be >= 1");
    if (!(f >= 0.0 && f <= 0.5))
        throw ArgumentError("comb_response: f must lie in [0, 0.5]");

    double mag = 1.0;
    const double den = static_cast<double>(M) * sin_pi(f);
    if (den != 0.0)
        mag = std::abs(sin_pi(static_cast<double>(M) * f) / den);
    const double db = mag > 0.0 ? 20.0 * std::log10(mag) : -std::numeric_limits<double>::infinity();
    return {mag, db};
}

double comb_cutoff(std::size_t M, double droop_db)
{
    if (M < 2)
        throw ArgumentError("comb_cutoff: M must be >= 2");
    if (!(droop_db > 0.0))
        throw ArgumentError("comb_cutoff: droop must be > 0 dB");

    // |H_C| falls monotonically from 1 to 0 on [0, 1/M].
    double lo = 0.0;
    double hi = 1.0 / static_cast<double>(M);
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        if (-comb_response(M, mid).magnitude_db < droop_db)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double min_osr_for_distortion(std::size_t M, double max_droop_db)
{
    // OSR = f_H / 2B with B at the droop frequency, f_H = 1.
    return 1.0 / (2.0 * comb_cutoff(M, max_droop_db));
}

DrCurve make_dr_curve(std::vector<DrPoint> points)
{
    std::sort(points.begin(), points.end(), [](const DrPoint& a, const DrPoint& b) { return a.amp_dbfs < b.amp_dbfs; });
    for (std::size_t i = 1; i < points.size(); ++i)
        if (!(points[i].amp_dbfs > points[i - 1].amp_dbfs))
            throw ArgumentError("dr curve: amplitudes must be strictly increasing");

    DrCurve c;
    c.peak_sndr_db = -std::numeric_limits<double>::infinity();
    const DrPoint* low = nullptr;
    const DrPoint* high = nullptr;
    const DrPoint* before_low = nullptr;
    for (const auto& p : points) {
        if (!p.ok)
            continue;
        if (p.sndr_db > c.peak_sndr_db) {
            c.peak_sndr_db = p.sndr_db;
            c.peak_amp_dbfs = p.amp_dbfs;
        }
        if (p.sndr_db > 0.0) {
            if (!low)
                low = &p;
            high = &p;
        } else if (!low) {
            before_low = &p;
        }
    }
    if (low) {
        // interpolate the 0 dB crossing below the first positive point
        double start = low->amp_dbfs;
        if (before_low) {
            const double t = -before_low->sndr_db / (low->sndr_db - before_low->sndr_db);
            start = before_low->amp_dbfs + t * (low->amp_dbfs - before_low->amp_dbfs);
        }
        c.dynamic_range_db = high->amp_dbfs - start;
    }
    c.points = std::move(points);
    return c;
}

} // namespace sdmlab
