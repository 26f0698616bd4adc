#include "fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <memory>
#include <mutex>

#include "sdmlab/errors.hpp"

namespace sdmlab::detail {

namespace {

// The FFTW planner is not thread-safe; execution on distinct arrays is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

struct FftwFree
{
    void operator()(void* p) const { fftw_free(p); }
};

} // namespace

void rfft(std::span<const double> x, std::vector<std::complex<double>>& out)
{
    const std::size_t n = x.size();
    if (n == 0)
        throw ArgumentError("rfft: empty input");

    std::unique_ptr<double, FftwFree> in(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
    std::unique_ptr<fftw_complex, FftwFree> spec(
        static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1))));

    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), spec.get(), FFTW_ESTIMATE);
    }
    std::memcpy(in.get(), x.data(), sizeof(double) * n);
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }

    out.resize(n / 2 + 1);
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = {spec.get()[k][0], spec.get()[k][1]};
}

std::vector<std::complex<double>> rfft(std::span<const double> x)
{
    std::vector<std::complex<double>> out;
    rfft(x, out);
    return out;
}

} // namespace sdmlab::detail
