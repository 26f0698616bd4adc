#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sdmlab/fir_filter.hpp"

namespace sdmlab {

/// One output symbol of a single-bit quantizer, always -1 or +1.
using Symbol = std::int8_t;

/// High-rate sequence y(n) of +-1 symbols.
using BitStream = std::vector<Symbol>;

/// Single-bit quantizer with levels {-1, +1}; quantize(0) == +1.
struct QuantizerSpec
{
    double level = 1.0;

    static QuantizerSpec single_bit() { return {}; }
};

/// Side information gathered while modulating. Never fatal.
struct RunNotes
{
    std::size_t overload_samples = 0; ///< samples with |x| > 1
    double max_abs_input = 0.0;
    double max_abs_state = 0.0;       ///< max |u(n)| seen at the quantizer input
    std::size_t padded_samples = 0;   ///< zeros appended to reach a multiple of M
};

struct ModulationResult
{
    BitStream y;
    std::vector<double> e; ///< e(n) = y(n) - u(n)
    RunNotes notes;
};

/// H(z) = (1 - z^-1)^L - 1 for L in {1, 2}. Higher orders need a
/// stabilizing denominator and are rejected with UnsupportedOrderError.
FirFilter make_loop_filter(int order);

/// 1 + H(z).
FirFilter ntf_of(const FirFilter& h);

/// Throws NumericStateError on a non-finite input.
Symbol quantize(double v, const QuantizerSpec& q = {});

/// Quantization-error history e(n-1), ..., e(n-L) plus the sample counter.
struct ModulatorState
{
    std::vector<double> error_history; ///< error_history[k-1] == e(n-k)
    std::uint64_t sample_index = 0;
};

/**
 * @brief Error-feedback modulator clocked at the high rate.
 *
 * u(n) = x(n) + sum_{k>=1} c_k e(n-k), y(n) = Q(u(n)), e(n) = y(n) - u(n),
 * so that Y(z) = X(z) + (1 + H(z)) E(z).
 */
class ErrorFeedbackModulator
{
public:
    explicit ErrorFeedbackModulator(FirFilter loop_filter, QuantizerSpec q = {});

    struct Step
    {
        Symbol y;
        double u;
        double e;
    };

    Step step(double x);
    void reset();

    const ModulatorState& state() const { return state_; }
    const FirFilter& loop_filter() const { return h_; }

private:
    FirFilter h_;
    QuantizerSpec q_;
    ModulatorState state_;
};

/// Run the error-feedback modulator over x from the all-zero state.
ModulationResult ef_modulate(std::span<const double> x, const FirFilter& h, const QuantizerSpec& q = {});

/// Promote symbols to doubles.
std::vector<double> to_real(std::span<const Symbol> y);

} // namespace sdmlab
