#include "sdmlab/polyphase_ti.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sdmlab/errors.hpp"

namespace sdmlab {

PolyphaseSet polyphase_decompose(const FirFilter& h, std::size_t M)
{
    if (M < 1)
        throw ArgumentError("polyphase_decompose: M must be >= 1");

    PolyphaseSet set;
    set.M = M;
    set.components.reserve(M);
    for (std::size_t k = 0; k < M; ++k) {
        std::vector<double> taps;
        for (std::size_t i = k; i < h.size(); i += M)
            taps.push_back(h[i]);
        if (taps.empty())
            taps.push_back(0.0);
        set.components.emplace_back(std::move(taps), Rate::low);
    }
    return set;
}

FirFilter PolyphaseSet::recompose() const
{
    std::size_t len = 0;
    for (std::size_t k = 0; k < components.size(); ++k)
        len = std::max(len, k + M * (components[k].size() - 1) + 1);

    std::vector<double> taps(len, 0.0);
    for (std::size_t k = 0; k < components.size(); ++k)
        for (std::size_t d = 0; d < components[k].size(); ++d)
            taps[k + d * M] = components[k][d];
    return FirFilter(std::move(taps), Rate::high);
}

BlockFilter::BlockFilter(std::size_t M)
  : M_(M)
  , entries_(M * M, FirFilter({0.0}, Rate::low))
{
    if (M < 1)
        throw ArgumentError("BlockFilter: M must be >= 1");
}

std::size_t BlockFilter::memory() const
{
    std::size_t m = 1;
    for (const auto& e : entries_)
        m = std::max(m, e.size());
    return m;
}

bool BlockFilter::is_block_causal() const
{
    for (std::size_t i = 0; i < M_; ++i)
        for (std::size_t j = 0; j <= i; ++j)
            if (entry(i, j)[0] != 0.0)
                return false;
    return true;
}

BlockFilter build_block_filter(const FirFilter& h, std::size_t M)
{
    const PolyphaseSet poly = polyphase_decompose(h, M);
    BlockFilter block(M);
    for (std::size_t i = 0; i < M; ++i) {
        for (std::size_t j = 0; j < M; ++j) {
            const FirFilter& hk = poly.components[(j + M - i) % M];
            block.entry(i, j) = (j < i ? hk.delayed(1) : hk).canonical();
        }
    }
    return block;
}

bool LowRateBank::is_rectangular() const
{
    for (const auto& s : streams)
        if (s.size() != length())
            return false;
    return true;
}

TiResult ti_modulate(std::span<const double> x, std::size_t M, const FirFilter& h, const QuantizerSpec& q)
{
    if (h[0] != 0.0)
        throw ArgumentError("ti_modulate: loop filter must be strictly causal (c_0 == 0)");
    return ti_modulate(x, build_block_filter(h, M), q);
}

TiResult ti_modulate(std::span<const double> x, const BlockFilter& block, const QuantizerSpec& q)
{
    const std::size_t M = block.M();
    if (!block.is_block_causal())
        throw ArgumentError("ti_modulate: block filter has a zero-lag term from a path to itself or an earlier path");

    TiResult out;
    const std::size_t Q = (x.size() + M - 1) / M;
    out.notes.padded_samples = Q * M - x.size();

    // errors[i][q] holds e_i(q); read with lag d as errors[i][q - d]
    std::vector<std::vector<double>> errors(M, std::vector<double>(Q, 0.0));
    out.bank.streams.assign(M, BitStream(Q + 1, Symbol{1}));

    for (std::size_t step = 0; step < Q; ++step) {
        for (std::size_t j = 0; j < M; ++j) {
            const std::size_t n = step * M + j;
            const double xj = n < x.size() ? x[n] : 0.0;

            const double ax = std::abs(xj);
            if (ax > 1.0)
                ++out.notes.overload_samples;
            out.notes.max_abs_input = std::max(out.notes.max_abs_input, ax);

            double u = xj;
            for (std::size_t i = 0; i < M; ++i) {
                const FirFilter& f = block.entry(i, j);
                const std::size_t dmax = std::min(f.size() - 1, step);
                for (std::size_t d = 0; d <= dmax; ++d)
                    if (f[d] != 0.0)
                        u += f[d] * errors[i][step - d];
            }

            const Symbol y = quantize(u, q);
            errors[j][step] = static_cast<double>(y) - u;
            out.notes.max_abs_state = std::max(out.notes.max_abs_state, std::abs(u));
            out.bank.streams[j][step + 1] = y;
        }
    }
    return out;
}

BitStream ti_multiplex_digital(const LowRateBank& bank)
{
    if (bank.streams.empty())
        throw ArgumentError("ti_multiplex_digital: empty bank");
    if (!bank.is_rectangular())
        throw ArgumentError("ti_multiplex_digital: ragged stream lengths");

    const std::size_t M = bank.M();
    BitStream y(M * bank.length());
    for (std::size_t n = 0; n < y.size(); ++n)
        y[n] = bank.streams[n % M][n / M];
    return y;
}

LowRateBank ti_demultiplex(std::span<const Symbol> y, std::size_t M)
{
    if (M < 1 || y.size() % M != 0)
        throw ArgumentError("ti_demultiplex: length must be a multiple of M");
    LowRateBank bank;
    bank.streams.assign(M, BitStream(y.size() / M));
    for (std::size_t n = 0; n < y.size(); ++n)
        bank.streams[n % M][n / M] = y[n];
    return bank;
}

EquivalenceReport align_streams(std::span<const Symbol> reference, std::span<const Symbol> candidate,
                                std::size_t max_delay)
{
    EquivalenceReport best;
    std::size_t best_count = std::numeric_limits<std::size_t>::max();

    for (std::size_t d = 0; d <= max_delay && d < candidate.size(); ++d) {
        const std::size_t overlap = std::min(reference.size(), candidate.size() - d);
        std::size_t count = 0;
        std::ptrdiff_t first = -1;
        double diff = 0.0;
        for (std::size_t n = 0; n < overlap; ++n) {
            if (reference[n] != candidate[n + d]) {
                if (first < 0)
                    first = static_cast<std::ptrdiff_t>(n);
                ++count;
                diff = std::max(diff, std::abs(double(reference[n]) - double(candidate[n + d])));
            }
        }
        if (count < best_count) {
            best_count = count;
            best.aligned_delay = d;
            best.mismatches = count;
            best.first_mismatch = first;
            best.max_abs_diff = diff;
        }
    }
    return best;
}

EquivalenceReport equivalence_check(std::span<const double> x, std::size_t M, int order)
{
    const FirFilter h = make_loop_filter(order);
    return equivalence_check(x, build_block_filter(h, M), order);
}

EquivalenceReport equivalence_check(std::span<const double> x, const BlockFilter& block, int order)
{
    const std::size_t M = block.M();
    const auto classical = ef_modulate(x, make_loop_filter(order));

    // A wrong block filter can make the TI loop unstable. Compare on the
    // longest halved prefix that still runs so the mismatch is located anyway.
    std::size_t n = x.size();
    bool diverged = false;
    while (true) {
        try {
            const auto ti = ti_modulate(x.first(n), block);
            const BitStream muxed = ti_multiplex_digital(ti.bank);
            EquivalenceReport r = align_streams(std::span<const Symbol>(classical.y).first(n), muxed, 4 * M);
            r.diverged = diverged;
            r.compared = n;
            r.passed = !diverged && r.max_abs_diff == 0.0 && r.mismatches == 0 && r.aligned_delay == M;
            return r;
        } catch (const NumericStateError&) {
            diverged = true;
            if (n < 8 * M)
                throw;
            n /= 2;
        }
    }
}

} // namespace sdmlab
