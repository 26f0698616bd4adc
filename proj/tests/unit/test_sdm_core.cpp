#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "helpers.hpp"
#include "sdmlab/errors.hpp"
#include "sdmlab/sdm_core.hpp"
#include "sdmlab/spectral_metrics.hpp"

using namespace sdmlab;

TEST_SUITE("sdm_core")
{
    TEST_CASE("loop filter for supported orders")
    {
        CHECK(make_loop_filter(2).coeffs() == std::vector<double>{0.0, -2.0, 1.0});
        CHECK(make_loop_filter(1).coeffs() == std::vector<double>{0.0, -1.0});
        CHECK(make_loop_filter(2).rate() == Rate::high);
    }

    TEST_CASE("order 3 is rejected and the message names D(z)")
    {
        CHECK_THROWS_AS(make_loop_filter(3), UnsupportedOrderError);
        CHECK_THROWS_AS(make_loop_filter(0), UnsupportedOrderError);
        try {
            make_loop_filter(3);
        } catch (const UnsupportedOrderError& e) {
            CHECK(std::string(e.what()).find("D(z)") != std::string::npos);
        }
    }

    TEST_CASE("loop filter is strictly causal and 1 + H = (1 - z^-1)^L")
    {
        for (int L : {1, 2}) {
            const auto h = make_loop_filter(L);
            CHECK(h[0] == 0.0);
            // binomial oracle
            std::vector<double> want{1.0};
            for (int i = 0; i < L; ++i) {
                std::vector<double> next(want.size() + 1, 0.0);
                for (std::size_t k = 0; k < want.size(); ++k) {
                    next[k] += want[k];
                    next[k + 1] -= want[k];
                }
                want = next;
            }
            CHECK(ntf_of(h).coeffs() == want);
        }
    }

    TEST_CASE("ntf examples")
    {
        CHECK(ntf_of(FirFilter{0.0, -2.0, 1.0}).coeffs() == std::vector<double>{1.0, -2.0, 1.0});
        CHECK(ntf_of(FirFilter{0.0}).coeffs() == std::vector<double>{1.0});
        CHECK(std::abs(ntf_of(make_loop_filter(2)).evaluate({1.0, 0.0})) == 0.0);
    }

    TEST_CASE("fir filter canonicalization and evaluation")
    {
        const FirFilter f{1.0, 2.0, 0.0, 0.0};
        CHECK_FALSE(f.is_canonical());
        CHECK(f.canonical().coeffs() == std::vector<double>{1.0, 2.0});
        CHECK(FirFilter{0.0, 0.0}.canonical().coeffs() == std::vector<double>{0.0});
        CHECK(FirFilter{0.0}.is_zero());
        CHECK_THROWS_AS(FirFilter(std::vector<double>{}), ArgumentError);
        CHECK(f.delayed(2).coeffs() == std::vector<double>{0.0, 0.0, 1.0, 2.0, 0.0, 0.0});
        // 1 + 2 z^-1 at z = 2 -> 2
        CHECK(f.evaluate({2.0, 0.0}).real() == doctest::Approx(2.0));
        const std::vector<double> x{1.0, 0.0, 0.0, 1.0};
        CHECK(f.filter(x) == std::vector<double>{1.0, 2.0, 0.0, 1.0});
    }

    TEST_CASE("quantizer tie rule and levels")
    {
        CHECK(quantize(0.3) == 1);
        CHECK(quantize(-0.3) == -1);
        CHECK(quantize(0.0) == 1);
        CHECK(quantize(-0.0) == 1);
        CHECK_THROWS_AS(quantize(std::numeric_limits<double>::quiet_NaN()), NumericStateError);
        CHECK_THROWS_AS(quantize(std::numeric_limits<double>::infinity()), NumericStateError);
    }

    TEST_CASE("first eight samples for x = 0 match a literal transcription of the loop")
    {
        // Independent transcription: two delay registers holding e(n-1), e(n-2).
        double e1 = 0.0, e2 = 0.0;
        std::vector<int> y_ref;
        std::vector<double> e_ref;
        for (int n = 0; n < 8; ++n) {
            const double u = 0.0 + (-2.0) * e1 + 1.0 * e2;
            const int y = u >= 0.0 ? 1 : -1;
            const double e = y - u;
            y_ref.push_back(y);
            e_ref.push_back(e);
            e2 = e1;
            e1 = e;
        }
        const std::vector<double> x(8, 0.0);
        const auto r = ef_modulate(x, make_loop_filter(2));
        for (int n = 0; n < 8; ++n) {
            CAPTURE(n);
            CHECK(r.y[n] == y_ref[n]);
            CHECK(r.e[n] == e_ref[n]);
        }
        // worked values
        CHECK(r.y[0] == 1);
        CHECK(r.e[0] == 1.0);
        CHECK(r.y[1] == -1);
        CHECK(r.e[1] == 1.0);
        CHECK(r.y[2] == -1);
        CHECK(r.e[2] == 0.0);
    }

    TEST_CASE("constant input is preserved on average")
    {
        const std::vector<double> x(4096, 0.5);
        const auto r = ef_modulate(x, make_loop_filter(2));
        const double mean = std::accumulate(r.y.begin(), r.y.end(), 0.0) / 4096.0;
        CHECK(std::abs(mean - 0.5) <= 0.02);
    }

    TEST_CASE("in-band SNDR of the ideal second-order loop")
    {
        const std::size_t n = 1u << 16;
        MetricConfig cfg;
        const auto x = testutil::tone(n, std::pow(10.0, -3.0 / 20.0), cfg.signal_freq());
        const auto r = ef_modulate(x, make_loop_filter(2));
        const auto s = compute_sndr(to_real(r.y), 1.0, cfg);
        CHECK(std::abs(s.sndr_db - 69.7) <= 1.0);
    }

    TEST_CASE("error path reconstructs the output: y = x + ntf * e")
    {
        for (int L : {1, 2}) {
            const auto h = make_loop_filter(L);
            const auto ntf = ntf_of(h);
            for (std::uint64_t s = 0; s < 100; ++s) {
                const auto x = testutil::uniform(1024, 0.9, 1000 * L + s);
                const auto r = ef_modulate(x, h);
                const auto shaped = ntf.filter(r.e);
                double worst = 0.0;
                for (std::size_t n = 0; n < x.size(); ++n)
                    worst = std::max(worst, std::abs(x[n] + shaped[n] - r.y[n]));
                CHECK(worst <= 1e-12);
            }
        }
    }

    TEST_CASE("outputs are always +-1")
    {
        const auto x = testutil::uniform(1u << 16, 1.0, 7);
        for (int L : {1, 2}) {
            const auto r = ef_modulate(x, make_loop_filter(L));
            CHECK(std::all_of(r.y.begin(), r.y.end(), [](Symbol v) { return v == 1 || v == -1; }));
        }
    }

    TEST_CASE("second-order loop stays bounded for |x| <= 0.707")
    {
        ErrorFeedbackModulator mod(make_loop_filter(2));
        const auto x = testutil::uniform(1'000'000, 0.707, 11);
        double worst = 0.0;
        for (double v : x)
            worst = std::max(worst, std::abs(mod.step(v).u));
        CHECK(worst <= 5.0);
    }

    TEST_CASE("second-order loop stays bounded for constant |x| <= 0.707")
    {
        for (double dc : {-0.707, -0.5, 0.1, 0.5, 0.707}) {
            ErrorFeedbackModulator mod(make_loop_filter(2));
            double worst = 0.0;
            for (int n = 0; n < 100000; ++n)
                worst = std::max(worst, std::abs(mod.step(dc).u));
            CHECK(worst <= 5.0);
        }
    }

    TEST_CASE("zero input has no DC")
    {
        const std::vector<double> x(1u << 20, 0.0);
        const auto r = ef_modulate(x, make_loop_filter(2));
        const double mean = std::accumulate(r.y.begin(), r.y.end(), 0.0) / static_cast<double>(x.size());
        CHECK(std::abs(mean) <= 0.01);
    }

    TEST_CASE("modulator state and step interface")
    {
        ErrorFeedbackModulator mod(make_loop_filter(2));
        CHECK(mod.state().error_history.size() == 2);
        const auto s0 = mod.step(0.0);
        CHECK(s0.y == 1);
        CHECK(s0.e == 1.0);
        CHECK(mod.state().error_history[0] == 1.0);
        CHECK(mod.state().sample_index == 1);
        mod.reset();
        CHECK(mod.state().sample_index == 0);
        CHECK(mod.state().error_history == std::vector<double>{0.0, 0.0});
        CHECK_THROWS_AS(ErrorFeedbackModulator(FirFilter{0.5, -1.0}), ArgumentError);
    }

    TEST_CASE("overload is recorded, not fatal")
    {
        std::vector<double> x(64, 0.5);
        x[10] = 1.2;
        x[20] = -1.5;
        const auto r = ef_modulate(x, make_loop_filter(2));
        CHECK(r.notes.overload_samples == 2);
        CHECK(r.notes.max_abs_input == 1.5);
        CHECK(r.y.size() == x.size());
    }
}
