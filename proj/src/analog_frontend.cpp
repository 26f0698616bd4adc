#include "sdmlab/analog_frontend.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "sdmlab/errors.hpp"
#include "sdmlab/seeding.hpp"

namespace sdmlab {

namespace {

std::vector<double> gaussian_deviations(double sigma, std::uint64_t seed, std::size_t count)
{
    std::vector<double> tau(count, 0.0);
    if (sigma == 0.0)
        return tau;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, sigma);
    for (auto& t : tau)
        t = dist(rng);
    return tau;
}

// Adds level * overlap / dt of [a, b) to every cell. Positions are in cells
// relative to the grid origin at t = 0; `origin` is the cell of samples[0].
void rasterize(std::vector<double>& cells, std::int64_t origin, double pa, double pb, double level)
{
    if (pb < pa) {
        std::swap(pa, pb);
        level = -level;
    }
    const auto ia = static_cast<std::int64_t>(std::floor(pa));
    const auto ib = static_cast<std::int64_t>(std::floor(pb));
    auto cell = [&](std::int64_t c) -> double& { return cells[static_cast<std::size_t>(c - origin)]; };

    if (ia == ib) {
        cell(ia) += level * (pb - pa);
        return;
    }
    cell(ia) += level * (static_cast<double>(ia + 1) - pa);
    for (std::int64_t c = ia + 1; c < ib; ++c)
        cell(c) += level;
    const double tail = pb - static_cast<double>(ib);
    if (tail > 0.0)
        cell(ib) += level * tail;
}

} // namespace

void JitterSpec::validate(double period) const
{
    if (!(sigma_tau >= 0.0) || !std::isfinite(sigma_tau))
        throw ConfigError("jitter sigma_tau must be finite and >= 0");
    if (sigma_tau >= 0.25 * period)
        throw ConfigError("jitter sigma_tau = " + std::to_string(sigma_tau) +
                          " s is >= 0.25 * clock period; edges could reorder");
}

ClockTrain make_clock(double period, double phase, const JitterSpec& jitter, std::size_t count)
{
    jitter.validate(period);
    const auto tau = gaussian_deviations(jitter.sigma_tau, jitter.seed, count);
    return make_clock(period, phase, tau);
}

ClockTrain make_clock(double period, double phase, std::span<const double> deviations)
{
    if (deviations.empty())
        throw ArgumentError("make_clock: count must be >= 1");
    if (!(period > 0.0))
        throw ArgumentError("make_clock: period must be > 0");

    ClockTrain clk;
    clk.ideal_period = period;
    clk.phase_offset = phase;
    clk.edge_times.resize(deviations.size());
    for (std::size_t n = 0; n < deviations.size(); ++n) {
        if (!std::isfinite(deviations[n]))
            throw ArgumentError("make_clock: non-finite edge deviation");
        clk.edge_times[n] = clk.ideal_edge(n) + deviations[n];
    }
    return clk;
}

std::vector<ClockTrain> make_mux_clocks(std::size_t M, double t_high, std::size_t count, const JitterSpec& jitter)
{
    if (M < 1)
        throw ArgumentError("make_mux_clocks: M must be >= 1");
    const double t_low = static_cast<double>(M) * t_high;
    jitter.validate(t_low);

    std::vector<ClockTrain> clocks;
    clocks.reserve(M);
    if (jitter.correlated) {
        const auto tau = gaussian_deviations(jitter.sigma_tau, derive_seed(jitter.seed, seed_stream::mux_common), count);
        for (std::size_t p = 0; p < M; ++p)
            clocks.push_back(make_clock(t_low, static_cast<double>(p) * t_high, tau));
    } else {
        for (std::size_t p = 0; p < M; ++p) {
            const auto tau = gaussian_deviations(jitter.sigma_tau,
                                                 derive_seed(jitter.seed, seed_stream::mux_path_base + p), count);
            clocks.push_back(make_clock(t_low, static_cast<double>(p) * t_high, tau));
        }
    }
    return clocks;
}

double AnalogWaveform::at_cell(std::int64_t c) const
{
    if (c < first_cell || c >= end_cell())
        return 0.0;
    return samples[static_cast<std::size_t>(c - first_cell)];
}

std::vector<double> AnalogWaveform::window(std::int64_t first, std::size_t count) const
{
    std::vector<double> out(count, 0.0);
    const std::int64_t lo = std::max(first, first_cell);
    const std::int64_t hi = std::min(first + static_cast<std::int64_t>(count), end_cell());
    for (std::int64_t c = lo; c < hi; ++c)
        out[static_cast<std::size_t>(c - first)] = samples[static_cast<std::size_t>(c - first_cell)];
    return out;
}

double AnalogWaveform::integral() const
{
    double acc = 0.0;
    for (double s : samples)
        acc += s;
    return acc * cell_width();
}

double AnalogWaveform::segment_integral() const
{
    double acc = 0.0;
    for (const auto& s : segments)
        acc += s.level * (s.end - s.start);
    return acc;
}

AnalogWaveform render_nrz(std::span<const Symbol> y, const ClockTrain& clock, std::size_t K)
{
    return render_nrz(y, clock, K, clock.ideal_period);
}

namespace {

void check_render_args(std::span<const Symbol> y, const ClockTrain& clock, std::size_t K, double t_high)
{
    if (K < 1)
        throw ArgumentError("render_nrz: K must be >= 1");
    if (!(t_high > 0.0))
        throw ArgumentError("render_nrz: T_H must be > 0");
    if (clock.size() != y.size() + 1)
        throw ArgumentError("render_nrz: clock has " + std::to_string(clock.size()) + " edges, need " +
                            std::to_string(y.size() + 1));
}

// Cell range [lo, hi) covering t = 0, every realized edge and the ideal end of the stream.
std::pair<std::int64_t, std::int64_t> cell_span(const ClockTrain& clock, std::size_t symbols, double cells_per_second)
{
    const auto& t = clock.edge_times;
    const auto [tmin, tmax] = std::minmax_element(t.begin(), t.end());
    const double ideal_end = clock.ideal_edge(symbols);
    const auto lo = std::min<std::int64_t>(0, static_cast<std::int64_t>(std::floor(*tmin * cells_per_second)));
    const auto hi = static_cast<std::int64_t>(std::ceil(std::max(*tmax, ideal_end) * cells_per_second));
    return {lo, std::max(hi, lo)};
}

void rasterize_stream(AnalogWaveform& w, std::span<const Symbol> y, const ClockTrain& clock, double weight)
{
    const double cells_per_second = static_cast<double>(w.cells_per_period) / w.t_high;
    const auto& t = clock.edge_times;
    for (std::size_t n = 0; n < y.size(); ++n) {
        const double level = static_cast<double>(y[n]);
        w.segments.push_back({t[n], t[n + 1], weight * level});
        rasterize(w.samples, w.first_cell, t[n] * cells_per_second, t[n + 1] * cells_per_second, level);
    }
}

} // namespace

AnalogWaveform render_nrz(std::span<const Symbol> y, const ClockTrain& clock, std::size_t K, double t_high)
{
    check_render_args(y, clock, K, t_high);

    AnalogWaveform w;
    w.cells_per_period = K;
    w.t_high = t_high;
    const auto [lo, hi] = cell_span(clock, y.size(), static_cast<double>(K) / t_high);
    w.first_cell = lo;
    w.samples.assign(static_cast<std::size_t>(hi - lo), 0.0);
    w.segments.reserve(y.size());
    rasterize_stream(w, y, clock, 1.0);
    return w;
}

AnalogWaveform analog_mux(const LowRateBank& bank, std::span<const ClockTrain> clocks, std::size_t K)
{
    const std::size_t M = bank.M();
    if (M == 0)
        throw ArgumentError("analog_mux: empty bank");
    if (clocks.size() != M)
        throw ArgumentError("analog_mux: " + std::to_string(clocks.size()) + " clocks for " + std::to_string(M) +
                            " paths");
    if (!bank.is_rectangular())
        throw ArgumentError("analog_mux: ragged stream lengths");

    AnalogWaveform g;
    g.cells_per_period = K;
    g.t_high = clocks[0].ideal_period / static_cast<double>(M);
    const double cells_per_second = static_cast<double>(K) / g.t_high;

    std::int64_t lo = 0, hi = 0;
    for (std::size_t p = 0; p < M; ++p) {
        check_render_args(bank.streams[p], clocks[p], K, g.t_high);
        const auto [plo, phi] = cell_span(clocks[p], bank.length(), cells_per_second);
        lo = std::min(lo, plo);
        hi = std::max(hi, phi);
    }
    g.first_cell = lo;
    g.samples.assign(static_cast<std::size_t>(hi - lo), 0.0);
    g.segments.reserve(M * bank.length());

    // Paths accumulate in fixed order 0..M-1 so the sum is bit-stable.
    const double weight = 1.0 / static_cast<double>(M);
    for (std::size_t p = 0; p < M; ++p)
        rasterize_stream(g, bank.streams[p], clocks[p], weight);
    for (auto& s : g.samples)
        s *= weight;
    return g;
}

namespace {

template <typename T>
std::vector<double> comb_impl(std::span<const T> y, std::size_t M)
{
    if (M < 1)
        throw ArgumentError("comb_filter: M must be >= 1");
    std::vector<double> out(y.size());
    for (std::size_t n = 0; n < y.size(); ++n) {
        double acc = 0.0;
        const std::size_t kmax = std::min(M - 1, n);
        for (std::size_t k = 0; k <= kmax; ++k)
            acc += static_cast<double>(y[n - k]);
        out[n] = acc / static_cast<double>(M);
    }
    return out;
}

} // namespace

std::vector<double> comb_filter(std::span<const double> y, std::size_t M)
{
    return comb_impl(y, M);
}

std::vector<double> comb_filter(std::span<const Symbol> y, std::size_t M)
{
    return comb_impl(y, M);
}

DtModelReport dt_model_check(const LowRateBank& bank, std::size_t M, std::size_t K)
{
    if (bank.M() != M)
        throw ArgumentError("dt_model_check: bank has " + std::to_string(bank.M()) + " paths, expected " +
                            std::to_string(M));

    const auto clocks = make_mux_clocks(M, 1.0, bank.length() + 1, JitterSpec{});
    const AnalogWaveform g = analog_mux(bank, clocks, K);
    const auto reference = comb_filter(ti_multiplex_digital(bank), M);

    DtModelReport r;
    const auto centre = static_cast<std::int64_t>(K / 2);
    for (std::size_t n = M; n < reference.size(); ++n) {
        const double v = g.at_cell(static_cast<std::int64_t>(n * K) + centre);
        r.max_abs_diff = std::max(r.max_abs_diff, std::abs(v - reference[n]));
        ++r.compared;
    }
    r.passed = r.max_abs_diff <= 1e-12;
    return r;
}

} // namespace sdmlab
