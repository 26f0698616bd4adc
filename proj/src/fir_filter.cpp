#include "sdmlab/fir_filter.hpp"

#include "sdmlab/errors.hpp"

#include <algorithm>

namespace sdmlab {

FirFilter::FirFilter()
  : coeffs_{0.0}
{
}

FirFilter::FirFilter(std::vector<double> coeffs, Rate rate)
  : coeffs_(std::move(coeffs))
  , rate_(rate)
{
    if (coeffs_.empty())
        throw ArgumentError("FirFilter: coefficient list must not be empty");
}

FirFilter::FirFilter(std::initializer_list<double> coeffs, Rate rate)
  : FirFilter(std::vector<double>(coeffs), rate)
{
}

FirFilter FirFilter::canonical() const
{
    std::vector<double> c = coeffs_;
    while (c.size() > 1 && c.back() == 0.0)
        c.pop_back();
    return FirFilter(std::move(c), rate_);
}

bool FirFilter::is_canonical() const
{
    return coeffs_.size() == 1 || coeffs_.back() != 0.0;
}

bool FirFilter::is_zero() const
{
    for (double c : coeffs_)
        if (c != 0.0)
            return false;
    return true;
}

FirFilter FirFilter::delayed(std::size_t d) const
{
    std::vector<double> c(d, 0.0);
    c.insert(c.end(), coeffs_.begin(), coeffs_.end());
    return FirFilter(std::move(c), rate_);
}

std::complex<double> FirFilter::evaluate(std::complex<double> z) const
{
    // Horner in z^-1
    const std::complex<double> zinv = 1.0 / z;
    std::complex<double> acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        acc = acc * zinv + *it;
    return acc;
}

std::vector<double> FirFilter::filter(std::span<const double> x) const
{
    std::vector<double> out(x.size(), 0.0);
    for (std::size_t n = 0; n < x.size(); ++n) {
        double acc = 0.0;
        const std::size_t kmax = std::min(coeffs_.size() - 1, n);
        for (std::size_t k = 0; k <= kmax; ++k)
            acc += coeffs_[k] * x[n - k];
        out[n] = acc;
    }
    return out;
}

} // namespace sdmlab
