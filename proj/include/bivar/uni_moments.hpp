// SPDX-License-Identifier: Apache-2.0
//
// Global and instantaneous moments of a single analytic signal.
//
// All instantaneous quantities come from one discretization of d/dt ln x+:
// the 2nd-order finite difference of ln|x+| (real part) and of the unwrapped
// phase (imaginary part). Because frequency, bandwidth and second central
// moment share it, sigma^2 = (omega - mean)^2 + upsilon^2 holds to round-off.

#ifndef BIVAR_UNI_MOMENTS_HPP
#define BIVAR_UNI_MOMENTS_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bivar/series.hpp"
#include "bivar/spectral.hpp"

namespace bivar {

struct GlobalMoments {
    double mean_frequency = 0.0;  ///< rad / time unit
    double second_central = 0.0;  ///< rad^2 / time unit^2
    double energy = 0.0;
};

struct MomentTrack {
    RealSeries frequency;
    RealSeries bandwidth;
    RealSeries second_central;
    RealSeries power;
};

/// First and second central moments of a one-sided spectrum. The weights
/// are normalized by their own sum; `energy` is carried through unchanged.
inline GlobalMoments spectral_moments(const std::vector<double>& frequencies, const std::vector<double>& weights,
                                      double energy)
{
    double total = 0.0, first = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        total += weights[k];
        first += frequencies[k] * weights[k];
    }
    if (!(total > 0.0)) throw std::invalid_argument("global moments: zero-energy signal");
    const double mean = first / total;
    double second = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        const double d = frequencies[k] - mean;
        second += d * d * weights[k];
    }
    return {mean, second / total, energy};
}

inline GlobalMoments global_moments(const AnalyticSeries& xp)
{
    const auto s = power_spectrum(xp);
    if (!(s.energy > 0.0)) throw std::invalid_argument("global_moments: zero-energy signal");
    return spectral_moments(s.frequencies, s.density, s.energy);
}

/// d ln x+ / dt split into its real (bandwidth) and imaginary (frequency) parts.
struct LogDerivative {
    std::vector<double> bandwidth;
    std::vector<double> frequency;
    Mask mask;
};

inline LogDerivative log_derivative(const AnalyticSeries& xp)
{
    const auto ap = amplitude_phase(xp);
    std::vector<double> log_amp(xp.size());
    double peak = 0.0;
    for (double a : ap.amplitude.values) peak = std::max(peak, a);
    for (std::size_t k = 0; k < log_amp.size(); ++k)
        log_amp[k] = std::log(std::max(ap.amplitude[k], amplitude_floor * peak + 1e-300));
    auto upsilon = derivative<double>(log_amp, xp.grid.dt);
    auto omega = derivative<double>(ap.phase.values, xp.grid.dt);
    return {std::move(upsilon), std::move(omega), ap.mask};
}

/// omega_x(t) = d phi_x / dt.
inline RealSeries inst_frequency(const AnalyticSeries& xp)
{
    auto ld = log_derivative(xp);
    return RealSeries(xp.grid, std::move(ld.frequency), std::move(ld.mask));
}

/// upsilon_x(t) = d ln a_x / dt.
inline RealSeries inst_bandwidth(const AnalyticSeries& xp)
{
    auto ld = log_derivative(xp);
    return RealSeries(xp.grid, std::move(ld.bandwidth), std::move(ld.mask));
}

/// sigma_x^2(t) = |dx+/dt - i mean x+|^2 / |x+|^2 with dx+/dt = x+ d ln x+/dt.
inline RealSeries inst_second_central(const AnalyticSeries& xp, double mean_frequency)
{
    const auto ld = log_derivative(xp);
    std::vector<double> out(xp.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const complex x = ld.mask.empty() || !ld.mask[k] ? xp[k] : complex(1.0, 0.0);
        const complex dx = x * complex(ld.bandwidth[k], ld.frequency[k]);
        out[k] = std::norm(dx - complex(0.0, mean_frequency) * x) / std::norm(x);
    }
    return RealSeries(xp.grid, std::move(out), ld.mask);
}

/// All instantaneous moments at once, about the signal's own global mean.
inline MomentTrack moment_track(const AnalyticSeries& xp, const GlobalMoments& g)
{
    auto ld = log_derivative(xp);
    std::vector<double> sigma2(xp.size()), power(xp.size());
    for (std::size_t k = 0; k < sigma2.size(); ++k) {
        const double d = ld.frequency[k] - g.mean_frequency;
        sigma2[k] = d * d + ld.bandwidth[k] * ld.bandwidth[k];
        power[k] = std::norm(xp[k]);
    }
    return {RealSeries(xp.grid, std::move(ld.frequency), ld.mask), RealSeries(xp.grid, std::move(ld.bandwidth), ld.mask),
            RealSeries(xp.grid, std::move(sigma2), ld.mask), RealSeries(xp.grid, std::move(power))};
}

/// Rectangle-rule time averages E^-1 sum a^2(t) q(t) dt, used to check that the
/// instantaneous moments decompose the global ones.
inline double power_weighted_average(const AnalyticSeries& xp, const RealSeries& q)
{
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < xp.size(); ++k) {
        const double w = std::norm(xp[k]);
        den += w;
        num += w * q[k];
    }
    if (!(den > 0.0)) throw std::invalid_argument("power_weighted_average: zero-energy signal");
    return num / den;
}

} // namespace bivar

#endif // BIVAR_UNI_MOMENTS_HPP
