#include "sdmlab/chain.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "sdmlab/errors.hpp"
#include "sdmlab/parallel.hpp"
#include "sdmlab/polyphase_ti.hpp"
#include "sdmlab/seeding.hpp"

namespace sdmlab {

std::size_t default_thread_count()
{
    if (const char* env = std::getenv("SDMLAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0)
            return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::string_view to_string(Architecture a)
{
    switch (a) {
    case Architecture::classical:
        return "classical";
    case Architecture::ti_digital:
        return "ti_digital";
    case Architecture::analog_mux:
        return "analog_mux";
    }
    return "unknown";
}

double ChainConfig::amplitude() const
{
    return std::pow(10.0, amp_dbfs / 20.0);
}

void ChainConfig::validate() const
{
    if (order != 1 && order != 2)
        throw ConfigError("modulator order must be 1 or 2");
    if (M < 1)
        throw ConfigError("M must be >= 1");
    if (samples < 1 || samples % M != 0)
        throw ConfigError("sample count must be a positive multiple of M");
    if (warmup % M != 0)
        throw ConfigError("warmup must be a multiple of M");
    if (K < 1)
        throw ConfigError("K must be >= 1");
    if (amp_dbfs > 0.0)
        throw ConfigError("amplitude must be <= 0 dBFS");
    metric.validate();
    jitter.validate(t_high());
}

InputTone make_input_tone(const ChainConfig& cfg)
{
    const double requested = cfg.metric.signal_freq();
    const double bin_hz = cfg.metric.f_high / static_cast<double>(cfg.samples);
    const auto bin = static_cast<std::size_t>(std::llround(requested / bin_hz));
    return {cfg.amplitude(), static_cast<double>(bin) * bin_hz, requested, bin};
}

std::vector<double> make_input(const InputTone& tone, std::size_t samples, double f_high)
{
    std::vector<double> x(samples);
    const double w = 2.0 * std::numbers::pi * tone.freq / f_high;
    for (std::size_t n = 0; n < samples; ++n)
        x[n] = tone.amplitude * std::sin(w * static_cast<double>(n));
    return x;
}

ChainOutput run_chain(Architecture arch, const ChainConfig& cfg, std::uint64_t seed)
{
    cfg.validate();

    ChainOutput out;
    out.tone = make_input_tone(cfg);
    const auto x = make_input(out.tone, cfg.warmup + cfg.samples, cfg.metric.f_high);
    const FirFilter h = make_loop_filter(cfg.order);
    const double t_high = cfg.t_high();
    const auto K = static_cast<std::int64_t>(cfg.K);
    out.window_cells = cfg.samples * cfg.K;
    const auto warm = static_cast<std::ptrdiff_t>(cfg.warmup);
    const auto delay = static_cast<std::ptrdiff_t>(cfg.M);

    JitterSpec jitter = cfg.jitter;
    switch (arch) {
    case Architecture::classical: {
        auto mod = ef_modulate(x, h);
        jitter.seed = derive_seed(seed, seed_stream::classical_dac);
        const auto clk = make_clock(t_high, 0.0, jitter, mod.y.size() + 1);
        out.waveform = render_nrz(mod.y, clk, cfg.K);
        out.window_first = warm * K;
        out.bits.assign(mod.y.begin() + warm, mod.y.end());
        out.notes = mod.notes;
        break;
    }
    case Architecture::ti_digital: {
        auto ti = ti_modulate(x, cfg.M, h);
        const BitStream y = ti_multiplex_digital(ti.bank);
        jitter.seed = derive_seed(seed, seed_stream::ti_dac);
        const auto clk = make_clock(t_high, 0.0, jitter, y.size() + 1);
        out.waveform = render_nrz(y, clk, cfg.K);
        out.window_first = (warm + delay) * K;
        out.bits.assign(y.begin() + warm + delay, y.end());
        out.notes = ti.notes;
        break;
    }
    case Architecture::analog_mux: {
        auto ti = ti_modulate(x, cfg.M, h);
        jitter.seed = seed;
        const auto clocks = make_mux_clocks(cfg.M, t_high, ti.bank.length() + 1, jitter);
        out.waveform = analog_mux(ti.bank, clocks, cfg.K);
        out.window_first = (warm + delay) * K;
        const BitStream y = ti_multiplex_digital(ti.bank);
        out.bits.assign(y.begin() + warm + delay, y.end());
        out.notes = ti.notes;
        break;
    }
    }
    return out;
}

SndrResult chain_sndr(Architecture arch, const ChainConfig& cfg, std::uint64_t seed)
{
    const auto out = run_chain(arch, cfg, seed);
    return compute_sndr(out.waveform, out.window_first, out.window_cells, cfg.metric);
}

DrCurve dr_sweep(std::span<const double> amplitudes_dbfs, Architecture arch, const ChainConfig& cfg,
                 std::uint64_t seed, std::size_t threads)
{
    std::vector<DrPoint> points(amplitudes_dbfs.size());
    parallel_for(points.size(), threads, [&](std::size_t i) {
        DrPoint& p = points[i];
        p.amp_dbfs = amplitudes_dbfs[i];
        try {
            ChainConfig c = cfg;
            c.amp_dbfs = p.amp_dbfs;
            const auto out = run_chain(arch, c, derive_seed(seed, i));
            p.sndr_db = compute_sndr(out.waveform, out.window_first, out.window_cells, c.metric).sndr_db;
            p.digital_sndr_db = compute_sndr(to_real(out.bits), 1.0, c.metric).sndr_db;
            p.sigma_dy = measure_sigma_dy(out.bits);
            p.sigma_dy_lag_m = measure_sigma_dy(out.bits, cfg.M);
        } catch (const std::exception& e) {
            p.ok = false;
            p.sndr_db = std::nan("");
            p.error = e.what();
        }
    });
    return make_dr_curve(std::move(points));
}

} // namespace sdmlab
