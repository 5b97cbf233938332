// SPDX-License-Identifier: Apache-2.0
//
// Generalized Morse wavelets and the frequency-domain continuous wavelet
// transform.
//
// Wavelets are bandpass normalized: Psi(peak) = 2. The transform of a real
// tone A cos(w t) at the matching scale is then A e^{i w t}, so coefficients
// along a ridge read directly as an analytic signal.

#ifndef BIVAR_WAVELET_HPP
#define BIVAR_WAVELET_HPP

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bivar/fft.hpp"
#include "bivar/series.hpp"
#include "bivar/spectral.hpp"

namespace bivar {

struct MorseParams {
    double beta = 3.0;
    double gamma = 3.0;

    void validate() const
    {
        if (!(beta > 0.0) || !(gamma > 0.0) || !std::isfinite(beta) || !std::isfinite(gamma))
            throw std::invalid_argument("MorseParams: beta and gamma must be positive");
    }

    /// Peak frequency of the unscaled wavelet, (beta/gamma)^(1/gamma).
    double peak() const { return std::pow(beta / gamma, 1.0 / gamma); }

    /// Time-domain standard deviation of the unscaled wavelet,
    /// sqrt(int Psi'^2 dw / int Psi^2 dw). Requires beta > 1/2.
    double time_spread() const
    {
        validate();
        if (!(beta > 0.5)) throw std::invalid_argument("MorseParams: time spread needs beta > 1/2");
        // int_0^inf w^(2 beta + q) e^(-2 w^gamma) dw, relative to q = 0.
        auto rel = [&](double q) {
            const double a = (2.0 * beta + q + 1.0) / gamma, a0 = (2.0 * beta + 1.0) / gamma;
            return std::exp(std::lgamma(a) - std::lgamma(a0) - (a - a0) * std::log(2.0));
        };
        const double b = beta, g = gamma;
        const double v = b * b * rel(-2.0) - 2.0 * b * g * rel(g - 2.0) + g * g * rel(2.0 * g - 2.0);
        return std::sqrt(v);
    }
};

/// Unscaled Morse wavelet in frequency: 2 (w/wp)^beta exp(wp^gamma - w^gamma)
/// for w > 0 and exactly zero otherwise.
inline double morse_wavelet(const MorseParams& p, double w)
{
    if (!(w > 0.0)) return 0.0;
    const double wp = p.peak();
    return 2.0 * std::exp(p.beta * std::log(w / wp) - std::pow(w, p.gamma) + p.beta / p.gamma);
}

/// Peak radian frequencies, log spaced and strictly descending.
struct ScaleGrid {
    std::vector<double> peak_frequencies;

    ScaleGrid() = default;
    explicit ScaleGrid(std::vector<double> f) : peak_frequencies(std::move(f)) { validate(); }

    /// `bands` bands from period_min up to period_max (time units).
    static ScaleGrid from_periods(double period_min, double period_max, std::size_t bands)
    {
        if (!(period_min > 0.0) || !(period_max > period_min))
            throw std::invalid_argument("ScaleGrid: need 0 < period_min < period_max");
        if (bands < 2) throw std::invalid_argument("ScaleGrid: at least 2 bands required");
        std::vector<double> f(bands);
        const double lo = std::log(period_min), hi = std::log(period_max);
        for (std::size_t j = 0; j < bands; ++j) {
            const double lp = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(bands - 1);
            f[j] = two_pi / std::exp(lp);
        }
        return ScaleGrid(std::move(f));
    }

    void validate() const
    {
        if (peak_frequencies.size() < 2) throw std::invalid_argument("ScaleGrid: at least 2 bands required");
        for (std::size_t j = 0; j < peak_frequencies.size(); ++j) {
            if (!(peak_frequencies[j] > 0.0) || !std::isfinite(peak_frequencies[j]))
                throw std::invalid_argument("ScaleGrid: frequencies must be positive and finite");
            if (j > 0 && !(peak_frequencies[j] < peak_frequencies[j - 1]))
                throw std::invalid_argument("ScaleGrid: frequencies must be strictly descending");
        }
    }

    std::size_t size() const { return peak_frequencies.size(); }
    double period(std::size_t j) const { return two_pi / peak_frequencies[j]; }

    /// Log-frequency step between adjacent bands (positive).
    double log_step() const
    {
        return std::log(peak_frequencies.front() / peak_frequencies.back()) / static_cast<double>(size() - 1);
    }

    /// Frequency at a fractional band index, interpolated in log frequency.
    double frequency_at(double index) const { return peak_frequencies.front() * std::exp(-log_step() * index); }
};

/// Fifty bands over periods 2.6 to 53 time units.
inline ScaleGrid default_scale_grid() { return ScaleGrid::from_periods(2.6, 53.0, 50); }

/// Wavelet at scale wp / peak_frequency sampled on the DFT bins of `grid`.
/// The even-length Nyquist bin is zero so the wavelet stays analytic.
inline std::vector<double> morse_wavelet_fd(const MorseParams& p, double peak_frequency, const SampleGrid& grid)
{
    p.validate();
    grid.validate();
    if (!(peak_frequency > 0.0) || !(peak_frequency < grid.nyquist()))
        throw std::invalid_argument("morse_wavelet_fd: peak frequency " + std::to_string(peak_frequency) +
                                    " outside (0, Nyquist)");
    const double s = p.peak() / peak_frequency;
    std::vector<double> psi(grid.n, 0.0);
    for (std::size_t k = 0; k < grid.n; ++k) {
        if (2 * k >= grid.n) continue;
        psi[k] = morse_wavelet(p, s * bin_frequency(static_cast<long>(k), grid));
    }
    return psi;
}

struct WaveletTransform {
    MorseParams params;
    ScaleGrid scales;
    SampleGrid grid;
    std::vector<std::vector<complex>> coefficients;  ///< [scale][time]
    std::vector<double> coi;                          ///< half-width per scale, time units
    /// RMS modulus per scale of the transform of unit-variance white noise.
    std::vector<double> noise_gain;

    std::size_t n_scales() const { return coefficients.size(); }
    std::size_t n_times() const { return grid.n; }
    const complex& at(std::size_t j, std::size_t k) const { return coefficients[j][k]; }
};

namespace detail {

inline WaveletTransform cwt_impl(const SampleGrid& g, std::vector<complex> padded, std::size_t offset,
                                 const ScaleGrid& scales, const MorseParams& p)
{
    p.validate();
    g.validate();
    scales.validate();
    for (double f : scales.peak_frequencies)
        if (!(f < g.nyquist()))
            throw std::invalid_argument("cwt: scale peak frequency " + std::to_string(f) + " beyond Nyquist");
    const std::size_t m = padded.size();
    const SampleGrid pg{g.t0, g.dt, m};
    const auto X = fft::forward(std::span<const complex>(padded));
    WaveletTransform w{p, scales, g, {}, {}, {}};
    w.coefficients.reserve(scales.size());
    // The time spread diverges for beta <= 1/2; the whole record is then edge-affected.
    const double spread =
        p.beta > 0.5 ? std::sqrt(2.0) * p.time_spread() : std::numeric_limits<double>::infinity();
    std::vector<complex> prod(m);
    for (double f : scales.peak_frequencies) {
        const auto psi = morse_wavelet_fd(p, f, pg);
        double power = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            prod[k] = X[k] * psi[k];
            power += psi[k] * psi[k];
        }
        w.noise_gain.push_back(std::sqrt(power / static_cast<double>(m)));
        const auto full = fft::inverse(prod);
        w.coefficients.emplace_back(full.begin() + static_cast<std::ptrdiff_t>(offset),
                                    full.begin() + static_cast<std::ptrdiff_t>(offset + g.n));
        w.coi.push_back(spread * p.peak() / f);
    }
    return w;
}

} // namespace detail

/// W_s(t) = IFFT(X(w) Psi(s w)) for every scale. Linear in x.
inline WaveletTransform cwt(const RealSeries& x, const ScaleGrid& scales, const MorseParams& p = {},
                            Padding pad = Padding::none)
{
    x.require_finite("cwt");
    const auto padded = pad_record<double>(x.values, pad);
    return detail::cwt_impl(x.grid, {padded.begin(), padded.end()}, pad == Padding::none ? 0 : x.size(), scales, p);
}

/// Complex input. For an analytic x+ this is twice the transform of Re x+.
inline WaveletTransform cwt(const AnalyticSeries& x, const ScaleGrid& scales, const MorseParams& p = {},
                            Padding pad = Padding::none)
{
    x.require_finite("cwt");
    return detail::cwt_impl(x.grid, pad_record<complex>(x.values, pad), pad == Padding::none ? 0 : x.size(), scales,
                            p);
}

} // namespace bivar

#endif // BIVAR_WAVELET_HPP
