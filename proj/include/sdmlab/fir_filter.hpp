#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace sdmlab {

/// Clock domain of the z^-1 a filter is written in.
enum class Rate { high, low };

/**
 * @brief FIR transfer function sum_k c_k z^-k.
 *
 * Coefficients are kept as given; canonical() strips trailing zeros but
 * always leaves at least one tap.
 */
class FirFilter
{
public:
    FirFilter();
    explicit FirFilter(std::vector<double> coeffs, Rate rate = Rate::high);
    FirFilter(std::initializer_list<double> coeffs, Rate rate = Rate::high);

    const std::vector<double>& coeffs() const { return coeffs_; }
    Rate rate() const { return rate_; }
    std::size_t size() const { return coeffs_.size(); }

    /// Tap k, zero past the end.
    double operator[](std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : 0.0; }

    FirFilter canonical() const;
    bool is_canonical() const;
    bool is_zero() const;

    /// Multiply by z^-d in the filter's own clock domain.
    FirFilter delayed(std::size_t d) const;

    std::complex<double> evaluate(std::complex<double> z) const;

    /// Apply to a sequence with zero initial state; output has the input's length.
    std::vector<double> filter(std::span<const double> x) const;

    friend bool operator==(const FirFilter&, const FirFilter&) = default;

private:
    std::vector<double> coeffs_;
    Rate rate_ = Rate::high;
};

} // namespace sdmlab
