// SPDX-License-Identifier: Apache-2.0
//
// Thin RAII wrapper over FFTW for one-shot complex transforms of any length.

#ifndef BIVAR_FFT_HPP
#define BIVAR_FFT_HPP

#include <complex>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

namespace bivar::fft {

namespace detail {

// FFTW's planner is not re-entrant; execution of distinct plans is.
inline std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

struct PlanDeleter {
    void operator()(fftw_plan_s* p) const
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(p);
    }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

inline std::vector<std::complex<double>> transform(std::span<const std::complex<double>> in, int sign)
{
    const auto n = in.size();
    std::vector<std::complex<double>> src(in.begin(), in.end());
    std::vector<std::complex<double>> dst(n);
    if (n == 0) return dst;
    Plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan.reset(fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(src.data()),
                                    reinterpret_cast<fftw_complex*>(dst.data()), sign, FFTW_ESTIMATE));
    }
    if (!plan) throw std::runtime_error("fft: FFTW failed to create a plan");
    fftw_execute(plan.get());
    return dst;
}

} // namespace detail

/// X[k] = sum_j x[j] exp(-2 pi i jk/n), unnormalized.
inline std::vector<std::complex<double>> forward(std::span<const std::complex<double>> x)
{
    return detail::transform(x, FFTW_FORWARD);
}

inline std::vector<std::complex<double>> forward(std::span<const double> x)
{
    std::vector<std::complex<double>> c(x.begin(), x.end());
    return detail::transform(c, FFTW_FORWARD);
}

/// x[j] = (1/n) sum_k X[k] exp(+2 pi i jk/n).
inline std::vector<std::complex<double>> inverse(std::span<const std::complex<double>> spectrum)
{
    auto out = detail::transform(spectrum, FFTW_BACKWARD);
    const double scale = out.empty() ? 1.0 : 1.0 / static_cast<double>(out.size());
    for (auto& v : out) v *= scale;
    return out;
}

/// Signed bin index: k for k <= n/2 (Nyquist counted positive), k - n above.
inline long signed_bin(std::size_t k, std::size_t n)
{
    return (2 * k <= n) ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
}

} // namespace bivar::fft

#endif // BIVAR_FFT_HPP
