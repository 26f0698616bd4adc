#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sdmlab/fir_filter.hpp"
#include "sdmlab/sdm_core.hpp"

namespace sdmlab {

/// Type-1 polyphase components: H(z) = sum_k z^-k H_k(z^M).
struct PolyphaseSet
{
    std::vector<FirFilter> components; ///< low-rate filters, one per phase
    std::size_t M = 1;

    /// Interleave the component taps back into a high-rate filter.
    FirFilter recompose() const;
};

PolyphaseSet polyphase_decompose(const FirFilter& h, std::size_t M);

/**
 * @brief M x M low-rate block filter of a high-rate loop filter.
 *
 * Row i is the path whose quantization error is consumed, column j the path
 * whose quantizer input is formed:
 *
 *     u_j(q) = x_j(q) + sum_i entry(i, j) e_i(q)
 *
 * with entry(i, j) = H_{(j-i) mod M}(z), times z^-1 when j < i.
 */
class BlockFilter
{
public:
    explicit BlockFilter(std::size_t M);

    std::size_t M() const { return M_; }

    const FirFilter& entry(std::size_t row, std::size_t col) const { return entries_[row * M_ + col]; }
    FirFilter& entry(std::size_t row, std::size_t col) { return entries_[row * M_ + col]; }

    /// Longest entry, i.e. the number of low-rate error samples each path must remember.
    std::size_t memory() const;

    /// The zero-lag part of every entry only couples path i into a later path j > i.
    bool is_block_causal() const;

    friend bool operator==(const BlockFilter&, const BlockFilter&) = default;

private:
    std::size_t M_;
    std::vector<FirFilter> entries_;
};

BlockFilter build_block_filter(const FirFilter& h, std::size_t M);

/// M low-rate +-1 streams at f_L = f_H / M.
struct LowRateBank
{
    std::vector<BitStream> streams;

    std::size_t M() const { return streams.size(); }
    std::size_t length() const { return streams.empty() ? 0 : streams.front().size(); }
    bool is_rectangular() const;
};

struct TiResult
{
    LowRateBank bank;
    RunNotes notes;
};

/**
 * @brief Time-interleaved error-feedback modulator.
 *
 * Phase r of the input, x_r(q) = x(qM + r), drives path r. Paths are
 * evaluated in ascending r at every low-rate step. Each stream starts with
 * the output register's reset word (+1), so the multiplexed stream is the
 * classical output delayed by M high-rate samples. Inputs whose length is
 * not a multiple of M are zero padded; the padding is reported in notes.
 */
TiResult ti_modulate(std::span<const double> x, std::size_t M, const FirFilter& h, const QuantizerSpec& q = {});

/// Same, with an explicit (possibly hand-modified) block filter.
TiResult ti_modulate(std::span<const double> x, const BlockFilter& block, const QuantizerSpec& q = {});

/// y(n) = y_{n mod M}(n / M).
BitStream ti_multiplex_digital(const LowRateBank& bank);

/// Inverse of ti_multiplex_digital; the length must be a multiple of M.
LowRateBank ti_demultiplex(std::span<const Symbol> y, std::size_t M);

struct EquivalenceReport
{
    double max_abs_diff = 0.0;   ///< residual at the best delay
    std::size_t aligned_delay = 0;
    std::size_t mismatches = 0;
    std::ptrdiff_t first_mismatch = -1; ///< classical sample index of the first mismatch, -1 if none
    std::size_t compared = 0;    ///< input samples compared
    bool diverged = false;       ///< candidate loop blew up on the full input
    bool passed = false;
};

/// Delay search between a reference and a candidate stream, over [0, max_delay].
EquivalenceReport align_streams(std::span<const Symbol> reference, std::span<const Symbol> candidate,
                                std::size_t max_delay);

/// Classical vs TI output for loop order L. Passes iff residual is 0 at delay M.
EquivalenceReport equivalence_check(std::span<const double> x, std::size_t M, int order);

/// Same, against a caller-supplied block filter for the TI side.
EquivalenceReport equivalence_check(std::span<const double> x, const BlockFilter& block, int order);

} // namespace sdmlab
