#include "sdmlab/sdm_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sdmlab/errors.hpp"

namespace sdmlab {

FirFilter make_loop_filter(int order)
{
    switch (order) {
    case 1:
        return FirFilter{0.0, -1.0};
    case 2:
        return FirFilter{0.0, -2.0, 1.0};
    default:
        throw UnsupportedOrderError("loop filter order " + std::to_string(order) +
                                    " unsupported: only L = 1 and L = 2 have D(z) = 1");
    }
}

FirFilter ntf_of(const FirFilter& h)
{
    std::vector<double> c = h.coeffs();
    c[0] += 1.0;
    return FirFilter(std::move(c), h.rate());
}

Symbol quantize(double v, const QuantizerSpec&)
{
    if (!std::isfinite(v))
        throw NumericStateError("quantizer input is not finite (modulator diverged)");
    return v >= 0.0 ? Symbol{1} : Symbol{-1};
}

ErrorFeedbackModulator::ErrorFeedbackModulator(FirFilter loop_filter, QuantizerSpec q)
  : h_(std::move(loop_filter))
  , q_(q)
{
    if (h_[0] != 0.0)
        throw ArgumentError("loop filter must be strictly causal (c_0 == 0)");
    reset();
}

void ErrorFeedbackModulator::reset()
{
    state_.error_history.assign(h_.size() - 1, 0.0);
    state_.sample_index = 0;
}

ErrorFeedbackModulator::Step ErrorFeedbackModulator::step(double x)
{
    auto& hist = state_.error_history;
    double u = x;
    for (std::size_t k = 1; k < h_.size(); ++k)
        u += h_[k] * hist[k - 1];

    const Symbol y = quantize(u, q_);
    const double e = static_cast<double>(y) - u;

    if (!hist.empty()) {
        for (std::size_t k = hist.size() - 1; k > 0; --k)
            hist[k] = hist[k - 1];
        hist[0] = e;
    }
    ++state_.sample_index;
    return {y, u, e};
}

ModulationResult ef_modulate(std::span<const double> x, const FirFilter& h, const QuantizerSpec& q)
{
    ErrorFeedbackModulator mod(h, q);
    ModulationResult out;
    out.y.reserve(x.size());
    out.e.reserve(x.size());
    for (double xn : x) {
        const double ax = std::abs(xn);
        if (ax > 1.0)
            ++out.notes.overload_samples;
        out.notes.max_abs_input = std::max(out.notes.max_abs_input, ax);

        const auto s = mod.step(xn);
        out.notes.max_abs_state = std::max(out.notes.max_abs_state, std::abs(s.u));
        out.y.push_back(s.y);
        out.e.push_back(s.e);
    }
    return out;
}

std::vector<double> to_real(std::span<const Symbol> y)
{
    return {y.begin(), y.end()};
}

} // namespace sdmlab
