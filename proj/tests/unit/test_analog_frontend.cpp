#include <doctest.h>

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "sdmlab/analog_frontend.hpp"
#include "sdmlab/errors.hpp"
#include "sdmlab/polyphase_ti.hpp"

using namespace sdmlab;

namespace {

LowRateBank random_bank(std::size_t M, std::size_t len, std::uint64_t seed)
{
    LowRateBank bank;
    for (std::size_t p = 0; p < M; ++p)
        bank.streams.push_back(testutil::random_bits(len, seed * 131 + p));
    return bank;
}

// Sum of level * realized width, straight from the edge list.
double pulse_area(std::span<const Symbol> y, const ClockTrain& c)
{
    double a = 0.0;
    for (std::size_t n = 0; n < y.size(); ++n)
        a += y[n] * (c.edge_times[n + 1] - c.edge_times[n]);
    return a;
}

} // namespace

TEST_SUITE("analog_frontend")
{
    TEST_CASE("ideal clock edges")
    {
        const auto c = make_clock(1.0, 0.0, JitterSpec{}, 4);
        CHECK(c.edge_times == std::vector<double>{0.0, 1.0, 2.0, 3.0});
        for (std::size_t n = 0; n < c.size(); ++n)
            CHECK(c.edge_times[n] == c.ideal_edge(n));
    }

    TEST_CASE("mux clocks interleave at T_H spacing")
    {
        const auto clocks = make_mux_clocks(4, 1.0, 8, JitterSpec{});
        std::vector<double> all;
        for (std::size_t p = 0; p < 4; ++p) {
            CHECK(clocks[p].ideal_period == 4.0);
            CHECK(clocks[p].phase_offset == static_cast<double>(p));
            all.insert(all.end(), clocks[p].edge_times.begin(), clocks[p].edge_times.end());
        }
        std::sort(all.begin(), all.end());
        for (std::size_t i = 0; i < all.size(); ++i)
            CHECK(all[i] == static_cast<double>(i));
    }

    TEST_CASE("jitter standard deviation")
    {
        const std::size_t n = 100000;
        const auto c = make_clock(1.0, 0.0, JitterSpec{0.015, 77, false}, n);
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            mean += c.edge_times[i] - c.ideal_edge(i);
        mean /= n;
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = c.edge_times[i] - c.ideal_edge(i) - mean;
            var += d * d;
        }
        const double sd = std::sqrt(var / (n - 1));
        CHECK(std::abs(sd / 0.015 - 1.0) <= 0.02);
    }

    TEST_CASE("jitter spec guards edge ordering")
    {
        CHECK_NOTHROW(JitterSpec{0.2, 0, false}.validate(1.0));
        const JitterSpec too_wide{0.25, 0, false};
        const JitterSpec negative{-0.1, 0, false};
        CHECK_THROWS_AS(too_wide.validate(1.0), ConfigError);
        CHECK_THROWS_AS(negative.validate(1.0), ConfigError);
        CHECK_THROWS_AS(make_clock(1.0, 0.0, JitterSpec{0.3, 0, false}, 4), ConfigError);
    }

    TEST_CASE("correlated mux jitter shares one deviation per step")
    {
        const auto clocks = make_mux_clocks(4, 1.0, 100, JitterSpec{0.01, 3, true});
        for (std::size_t q = 0; q < 100; ++q) {
            const double d0 = clocks[0].edge_times[q] - clocks[0].ideal_edge(q);
            for (std::size_t p = 1; p < 4; ++p)
                CHECK(clocks[p].edge_times[q] - clocks[p].ideal_edge(q) == doctest::Approx(d0).epsilon(1e-9));
        }
        const auto indep = make_mux_clocks(4, 1.0, 100, JitterSpec{0.01, 3, false});
        CHECK(indep[0].edge_times != indep[1].edge_times);
    }

    TEST_CASE("NRZ rendering on an ideal clock")
    {
        const BitStream y{1, -1};
        const auto w = render_nrz(y, make_clock(1.0, 0.0, JitterSpec{}, 3), 4);
        CHECK(w.first_cell == 0);
        CHECK(w.samples == std::vector<double>{1, 1, 1, 1, -1, -1, -1, -1});
    }

    TEST_CASE("an edge inside a cell splits its area")
    {
        const std::size_t K = 4;
        const double half_cell = 0.5 / K;
        const BitStream y{1, -1};
        const std::vector<double> dev{0.0, half_cell, 0.0};
        const auto w = render_nrz(y, make_clock(1.0, 0.0, dev), K);
        // cell 4 covers [1, 1.25): half +1, half -1
        CHECK(w.at_cell(3) == 1.0);
        CHECK(w.at_cell(4) == doctest::Approx(0.5 * 1.0 + 0.5 * -1.0));
        CHECK(w.at_cell(5) == -1.0);
    }

    TEST_CASE("a late falling edge widens the pulse exactly")
    {
        const BitStream y{1};
        const std::vector<double> dev{0.0, 0.1};
        const auto w = render_nrz(y, make_clock(1.0, 0.0, dev), 32);
        CHECK(std::abs(w.integral() - 1.1) <= 1e-12);
    }

    TEST_CASE("area conservation with and without jitter")
    {
        for (double sigma : {0.0, 0.015, 0.1}) {
            const auto y = testutil::random_bits(5000, 21);
            const auto c = make_clock(1.0, 0.0, JitterSpec{sigma, 5, false}, y.size() + 1);
            const auto w = render_nrz(y, c, 16);
            CHECK(std::abs(w.integral() - pulse_area(y, c)) <= 1e-12 * y.size());
            CHECK(std::abs(w.segment_integral() - pulse_area(y, c)) <= 1e-12 * y.size());
        }
    }

    TEST_CASE("rendering is deterministic")
    {
        const auto y = testutil::random_bits(2000, 4);
        auto run = [&](double sigma, std::uint64_t seed) {
            return render_nrz(y, make_clock(1.0, 0.0, JitterSpec{sigma, seed, false}, y.size() + 1), 8).samples;
        };
        CHECK(run(0.0, 1) == run(0.0, 2));
        CHECK(run(0.01, 9) == run(0.01, 9));
        CHECK(run(0.01, 9) != run(0.01, 10));
    }

    TEST_CASE("analog mux with M = 1 is the NRZ DAC")
    {
        const auto y = testutil::random_bits(300, 12);
        LowRateBank bank{{y}};
        const auto clocks = make_mux_clocks(1, 1.0, y.size() + 1, JitterSpec{0.01, 4, false});
        const auto g = analog_mux(bank, clocks, 8);
        const auto v = render_nrz(y, clocks[0], 8);
        CHECK(g.first_cell == v.first_cell);
        CHECK(g.samples == v.samples);
    }

    TEST_CASE("ideal analog mux equals the comb of the multiplexed stream")
    {
        const auto bank = random_bank(4, 256, 1);
        const auto clocks = make_mux_clocks(4, 1.0, bank.length() + 1, JitterSpec{});
        const auto g = analog_mux(bank, clocks, 16);
        const auto comb = comb_filter(ti_multiplex_digital(bank), 4);
        for (std::size_t n = 4; n < comb.size(); ++n)
            CHECK(g.at_cell(static_cast<std::int64_t>(n * 16 + 8)) == doctest::Approx(comb[n]).epsilon(1e-12));
    }

    TEST_CASE("all-high streams give a constant output once every path has started")
    {
        LowRateBank bank{std::vector<BitStream>(4, BitStream(64, 1))};
        const auto clocks = make_mux_clocks(4, 1.0, 65, JitterSpec{});
        const auto g = analog_mux(bank, clocks, 8);
        for (std::int64_t c = 4 * 8; c < 64 * 4 * 8; ++c)
            REQUIRE(g.at_cell(c) == 1.0);
        CHECK_THROWS_AS(analog_mux(bank, std::span<const ClockTrain>(clocks).first(3), 8), ArgumentError);
    }

    TEST_CASE("path waveforms are shifted copies of one pulse train")
    {
        const std::size_t M = 4, K = 8;
        const auto y = testutil::random_bits(50, 30);
        const auto clocks = make_mux_clocks(M, 1.0, y.size() + 1, JitterSpec{});
        const auto ref = render_nrz(y, clocks[0], K, 1.0);
        for (std::size_t p = 1; p < M; ++p) {
            const auto w = render_nrz(y, clocks[p], K, 1.0);
            for (std::int64_t c = ref.first_cell; c < ref.end_cell(); ++c)
                REQUIRE(w.at_cell(c + static_cast<std::int64_t>(p * K)) == ref.at_cell(c));
        }
        // each pulse holds for M * K cells
        for (std::size_t q = 0; q < y.size(); ++q)
            for (std::size_t c = 0; c < M * K; ++c)
                REQUIRE(ref.at_cell(static_cast<std::int64_t>(q * M * K + c)) == y[q]);
    }

    TEST_CASE("comb filter examples")
    {
        const auto y = testutil::random_bits(100, 2);
        const auto yr = to_real(y);
        CHECK(comb_filter(yr, 1) == yr);

        BitStream alt(64);
        for (std::size_t i = 0; i < alt.size(); ++i)
            alt[i] = (i / 2) % 2 == 0 ? 1 : -1; // 1, 1, -1, -1, ...
        const auto c = comb_filter(alt, 4);
        for (std::size_t n = 3; n < c.size(); ++n)
            CHECK(c[n] == 0.0);

        const std::set<double> allowed{-1.0, -0.5, 0.0, 0.5, 1.0};
        const auto full = comb_filter(testutil::random_bits(4096, 3), 4);
        for (std::size_t n = 3; n < full.size(); ++n) // zero prehistory before n = M - 1
            CHECK(allowed.count(full[n]) == 1);
    }

    TEST_CASE("comb output has exactly M + 1 levels")
    {
        for (std::size_t M : {1, 2, 3, 4, 8}) {
            const auto c = comb_filter(testutil::random_bits(1u << 16, M), M);
            const std::set<double> levels(c.begin() + static_cast<long>(M), c.end());
            CHECK(levels.size() == M + 1);
        }
    }

    TEST_CASE("dt model check examples")
    {
        auto r = dt_model_check(random_bank(4, 512, 7), 4, 16);
        CHECK(r.max_abs_diff == 0.0);
        CHECK(r.passed);
        r = dt_model_check(random_bank(1, 512, 7), 1, 16);
        CHECK(r.max_abs_diff == 0.0);
        r = dt_model_check(random_bank(2, 512, 7), 2, 8);
        CHECK(r.max_abs_diff == 0.0);
    }

    TEST_CASE("dt model holds for 50 random banks per M")
    {
        for (std::size_t M : {1, 2, 4, 8})
            for (std::uint64_t s = 0; s < 50; ++s) {
                const auto r = dt_model_check(random_bank(M, 128, 1000 + s), M, 16);
                REQUIRE(r.max_abs_diff <= 1e-12);
                REQUIRE(r.compared > 0);
            }
    }

    TEST_CASE("bad render arguments")
    {
        const BitStream y{1, -1};
        CHECK_THROWS_AS(render_nrz(y, make_clock(1.0, 0.0, JitterSpec{}, 2), 4), ArgumentError);
        CHECK_THROWS_AS(render_nrz(y, make_clock(1.0, 0.0, JitterSpec{}, 3), 0), ArgumentError);
    }
}
