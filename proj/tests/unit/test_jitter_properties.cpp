#include <doctest.h>

#include <array>
#include <cmath>

#include "sdmlab/chain.hpp"
#include "sdmlab/parallel.hpp"
#include "sdmlab/spectral_metrics.hpp"

using namespace sdmlab;

namespace {

constexpr std::array<double, 4> kSigmas{0.005, 0.01, 0.02, 0.04};
constexpr std::uint64_t kSeeds[] = {11, 12, 13};

struct Point
{
    double sndr_db = 0.0;
    double sigma_dy = 0.0;
};

Point classical_point(double sigma, std::uint64_t seed, std::size_t M = 4)
{
    ChainConfig c;
    c.M = M;
    c.jitter.sigma_tau = sigma;
    const auto out = run_chain(Architecture::classical, c, seed);
    return {compute_sndr(out.waveform, out.window_first, out.window_cells, c.metric).sndr_db,
            measure_sigma_dy(out.bits)};
}

double ideal_sndr()
{
    static const double v = chain_sndr(Architecture::classical, ChainConfig{}, 1).sndr_db;
    return v;
}

} // namespace

TEST_SUITE("jitter_properties")
{
    TEST_CASE("SNDR falls monotonically with jitter, and tracks the closed form")
    {
        std::array<std::array<Point, 3>, 4> pts;
        parallel_for(12, default_thread_count(), [&](std::size_t i) {
            pts[i / 3][i % 3] = classical_point(kSigmas[i / 3], kSeeds[i % 3]);
        });

        const double amp = ChainConfig{}.amplitude();
        double prev = ideal_sndr();
        for (std::size_t s = 0; s < kSigmas.size(); ++s) {
            double sndr = 0.0, sdy = 0.0;
            for (const auto& p : pts[s]) {
                sndr += p.sndr_db / 3.0;
                sdy += p.sigma_dy / 3.0;
            }
            CAPTURE(kSigmas[s]);
            CHECK(sndr < prev);
            prev = sndr;

            const double predicted = predict_snr_jtt1(amp, 1.0, kSigmas[s], sdy, 64);
            if (predicted <= ideal_sndr() - 10.0)
                CHECK(std::abs(sndr - predicted) <= 1.5);
        }
    }

    TEST_CASE("mux gain is 20 log10(M) within 2 dB when jitter dominates both chains")
    {
        const double amp = ChainConfig{}.amplitude();
        std::size_t checked = 0;
        for (std::size_t M : {2, 4}) {
            for (double sigma : kSigmas) {
                const auto v = classical_point(sigma, 21, M);
                const double mux_pred = predict_snr_jtt1(amp, 1.0, sigma, v.sigma_dy, 64) + snr_improvement(M);
                if (mux_pred > ideal_sndr() - 10.0)
                    continue;
                ChainConfig c;
                c.M = M;
                c.jitter.sigma_tau = sigma;
                const double g = chain_sndr(Architecture::analog_mux, c, 21).sndr_db;
                CAPTURE(M);
                CAPTURE(sigma);
                CHECK(std::abs((g - v.sndr_db) - snr_improvement(M)) <= 2.0);
                ++checked;
            }
        }
        CHECK(checked >= 4);
    }
}
