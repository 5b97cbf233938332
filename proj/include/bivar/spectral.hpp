// SPDX-License-Identifier: Apache-2.0
//
// Analytic signal, canonical amplitude/phase, finite differences and the
// one-sided energy spectrum.

#ifndef BIVAR_SPECTRAL_HPP
#define BIVAR_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bivar/fft.hpp"
#include "bivar/series.hpp"

namespace bivar {

/// Edge treatment for transforms that are circular on the raw record.
enum class Padding { none, zero, mirror };

inline Padding parse_padding(const std::string& name)
{
    if (name == "none") return Padding::none;
    if (name == "zero") return Padding::zero;
    if (name == "mirror") return Padding::mirror;
    throw std::invalid_argument("unknown padding '" + name + "' (expected none, zero or mirror)");
}

inline const char* to_string(Padding p)
{
    switch (p) {
    case Padding::zero: return "zero";
    case Padding::mirror: return "mirror";
    default: return "none";
    }
}

/// Extends `x` by one record length on each side. Mirror padding reflects
/// about the end points with the edge sample repeated, so the padded record
/// is continuous. Returns `x` unchanged for Padding::none.
template <typename T>
std::vector<T> pad_record(std::span<const T> x, Padding pad)
{
    if (pad == Padding::none) return {x.begin(), x.end()};
    const std::size_t n = x.size();
    std::vector<T> out(3 * n, T{});
    std::copy(x.begin(), x.end(), out.begin() + static_cast<std::ptrdiff_t>(n));
    if (pad == Padding::mirror) {
        for (std::size_t k = 0; k < n; ++k) {
            out[n - 1 - k] = x[k];
            out[2 * n + k] = x[n - 1 - k];
        }
    }
    return out;
}

/// Principal value of an angle in (-pi, pi].
inline double wrap_to_pi(double a)
{
    double w = std::remainder(a, two_pi);
    if (w <= -pi) w += two_pi;
    return w;
}

/// Unwraps a sequence of principal-value angles. The first sample is kept as
/// given (mapped into (-pi, pi]); each later sample differs from its
/// predecessor by the minimal-magnitude increment.
inline std::vector<double> unwrap(std::span<const double> angles)
{
    std::vector<double> out(angles.size());
    if (angles.empty()) return out;
    out[0] = wrap_to_pi(angles[0]);
    for (std::size_t k = 1; k < angles.size(); ++k)
        out[k] = out[k - 1] + wrap_to_pi(angles[k] - angles[k - 1]);
    return out;
}

/// Second-order finite difference: central in the interior, one-sided
/// three-point at both ends. Exact for quadratics.
template <typename T>
std::vector<T> derivative(std::span<const T> s, double dt)
{
    const std::size_t n = s.size();
    if (n < 3) throw std::invalid_argument("derivative: at least 3 samples required");
    std::vector<T> d(n);
    const double h2 = 2.0 * dt;
    for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (s[k + 1] - s[k - 1]) / h2;
    d[0] = (-3.0 * s[0] + 4.0 * s[1] - s[2]) / h2;
    d[n - 1] = (3.0 * s[n - 1] - 4.0 * s[n - 2] + s[n - 3]) / h2;
    return d;
}

template <typename T>
Series<T> derivative(const Series<T>& s)
{
    s.grid.validate();
    return Series<T>(s.grid, derivative<T>(std::span<const T>(s.values), s.grid.dt), s.mask);
}

/// Analytic signal x+ = x + i H[x] through the DFT: positive-frequency bins
/// doubled, negative ones zeroed, DC and (even n) Nyquist bins left as is.
inline AnalyticSeries analytic_signal(const RealSeries& x, Padding pad = Padding::none)
{
    x.grid.validate();
    x.require_finite("analytic_signal");
    const auto padded = pad_record<double>(x.values, pad);
    const std::size_t m = padded.size();
    auto spec = fft::forward(std::span<const double>(padded));
    for (std::size_t k = 1; k < m; ++k) {
        const std::size_t twice = 2 * k;
        if (twice < m) spec[k] *= 2.0;
        else if (twice > m) spec[k] = 0.0;
    }
    auto full = fft::inverse(spec);
    const std::size_t offset = (pad == Padding::none) ? 0 : x.size();
    std::vector<complex> v(full.begin() + static_cast<std::ptrdiff_t>(offset),
                           full.begin() + static_cast<std::ptrdiff_t>(offset + x.size()));
    return AnalyticSeries(x.grid, std::move(v), x.mask);
}

/// Canonical amplitude and unwrapped phase of an analytic signal.
struct AmplitudePhase {
    RealSeries amplitude;
    RealSeries phase;
    Mask mask;  ///< samples below the amplitude floor
};

/// Relative floor below which |x+| is treated as zero.
inline constexpr double amplitude_floor = 1e-12;

inline AmplitudePhase amplitude_phase(const AnalyticSeries& xp)
{
    xp.grid.validate();
    const std::size_t n = xp.size();
    std::vector<double> amp(n), arg(n);
    double peak = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        amp[k] = std::abs(xp[k]);
        arg[k] = std::arg(xp[k]);
        peak = std::max(peak, amp[k]);
    }
    Mask mask(n, false);
    bool any = false;
    const double floor = amplitude_floor * peak;
    for (std::size_t k = 0; k < n; ++k) {
        if (amp[k] < floor || peak == 0.0 || xp.masked(k)) {
            mask[k] = true;
            any = true;
        }
    }
    if (any) {
        // Unwrap across the valid samples only, then interpolate into the gaps.
        std::vector<double> valid_args;
        std::vector<std::size_t> where;
        for (std::size_t k = 0; k < n; ++k)
            if (!mask[k]) {
                valid_args.push_back(arg[k]);
                where.push_back(k);
            }
        const auto uw = unwrap(valid_args);
        std::vector<double> phase(n, 0.0);
        for (std::size_t i = 0; i < where.size(); ++i) phase[where[i]] = uw[i];
        fill_masked(phase, mask);
        fill_masked(amp, mask);
        return {RealSeries(xp.grid, std::move(amp), mask), RealSeries(xp.grid, std::move(phase), mask), mask};
    }
    return {RealSeries(xp.grid, std::move(amp)), RealSeries(xp.grid, unwrap(arg)), Mask{}};
}

/// One-sided energy spectrum over bins 0..floor(n/2).
struct Spectrum {
    std::vector<double> frequencies;  ///< rad / time unit
    std::vector<double> density;
    double energy = 0.0;
    double bin_width = 0.0;  ///< frequency spacing, rad / time unit
};

/// Radian frequency of DFT bin k on grid g.
inline double bin_frequency(long k, const SampleGrid& g)
{
    return two_pi * static_cast<double>(k) / (static_cast<double>(g.n) * g.dt);
}

/// density[k] = |DFT(x+)[k]|^2 dt / n, so that the bins sum to the
/// time-domain energy sum |x+|^2 dt of an analytic input.
inline Spectrum power_spectrum(const AnalyticSeries& xp)
{
    xp.grid.validate();
    const auto X = fft::forward(std::span<const complex>(xp.values));
    const std::size_t n = xp.size();
    const std::size_t bins = n / 2 + 1;
    Spectrum s;
    s.bin_width = bin_frequency(1, xp.grid);
    s.frequencies.resize(bins);
    s.density.resize(bins);
    const double scale = xp.grid.dt / static_cast<double>(n);
    for (std::size_t k = 0; k < bins; ++k) {
        s.frequencies[k] = bin_frequency(static_cast<long>(k), xp.grid);
        s.density[k] = std::norm(X[k]) * scale;
    }
    double e = 0.0;
    for (const auto& v : xp.values) e += std::norm(v);
    s.energy = e * xp.grid.dt;
    return s;
}

} // namespace bivar

#endif // BIVAR_SPECTRAL_HPP
