#pragma once

#include <complex>
#include <span>
#include <vector>

namespace sdmlab::detail {

/// Forward real FFT, bins 0..N/2, unnormalized (FFTW r2c).
std::vector<std::complex<double>> rfft(std::span<const double> x);

/// Same, writing into `out` (resized to N/2 + 1) so repeated calls reuse storage.
void rfft(std::span<const double> x, std::vector<std::complex<double>>& out);

} // namespace sdmlab::detail
