// SPDX-License-Identifier: Apache-2.0
//
// Uniformly sampled time series shared by every module.

#ifndef BIVAR_SERIES_HPP
#define BIVAR_SERIES_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bivar {

using complex = std::complex<double>;

/// Per-sample validity flags. `true` marks a sample whose value is a fill
/// (interpolated or zeroed) rather than a trustworthy estimate.
using Mask = std::vector<bool>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Time origin, sample interval and sample count of a uniform grid.
struct SampleGrid {
    double t0 = 0.0;
    double dt = 1.0;
    std::size_t n = 0;

    double time(std::size_t k) const { return t0 + dt * static_cast<double>(k); }
    double duration() const { return dt * static_cast<double>(n); }
    double nyquist() const { return pi / dt; }

    void validate() const
    {
        if (!(dt > 0.0) || !std::isfinite(dt))
            throw std::invalid_argument("SampleGrid: dt must be positive and finite");
        if (!std::isfinite(t0))
            throw std::invalid_argument("SampleGrid: t0 must be finite");
        if (n < 4)
            throw std::invalid_argument("SampleGrid: at least 4 samples required, got " + std::to_string(n));
    }

    friend bool operator==(const SampleGrid&, const SampleGrid&) = default;
};

namespace detail {

inline bool is_finite(double v) { return std::isfinite(v); }
inline bool is_finite(const complex& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

} // namespace detail

/// Values on a SampleGrid with an optional mask (empty mask = nothing masked).
template <typename T>
struct Series {
    using value_type = T;

    SampleGrid grid;
    std::vector<T> values;
    Mask mask;

    Series() = default;
    Series(SampleGrid g, std::vector<T> v, Mask m = {})
        : grid(g), values(std::move(v)), mask(std::move(m))
    {
        if (values.size() != grid.n) {
            std::ostringstream os;
            os << "Series: " << values.size() << " values on a grid of " << grid.n << " samples";
            throw std::invalid_argument(os.str());
        }
        if (!mask.empty() && mask.size() != grid.n)
            throw std::invalid_argument("Series: mask length differs from grid");
    }

    static Series zeros(const SampleGrid& g) { return Series(g, std::vector<T>(g.n, T{})); }

    std::size_t size() const { return values.size(); }
    const T& operator[](std::size_t k) const { return values[k]; }
    T& operator[](std::size_t k) { return values[k]; }
    std::span<const T> view() const { return values; }

    bool masked(std::size_t k) const { return !mask.empty() && mask[k]; }
    bool any_masked() const
    {
        for (bool m : mask)
            if (m) return true;
        return false;
    }
    void mask_sample(std::size_t k)
    {
        if (mask.empty()) mask.assign(grid.n, false);
        mask[k] = true;
    }

    /// Throws if any value is NaN or infinite.
    void require_finite(const char* what) const
    {
        for (std::size_t k = 0; k < values.size(); ++k) {
            if (!detail::is_finite(values[k])) {
                std::ostringstream os;
                os << what << ": non-finite value at sample " << k;
                throw std::invalid_argument(os.str());
            }
        }
    }
};

using RealSeries = Series<double>;
using AnalyticSeries = Series<complex>;

/// Builds a validated real series.
inline RealSeries make_real_series(const SampleGrid& grid, std::vector<double> values)
{
    grid.validate();
    RealSeries s(grid, std::move(values));
    s.require_finite("RealSeries");
    return s;
}

inline void require_same_grid(const SampleGrid& a, const SampleGrid& b, const char* what)
{
    if (!(a == b)) throw std::invalid_argument(std::string(what) + ": series are on different grids");
}

/// Union of two masks (either may be empty).
inline Mask merge_masks(const Mask& a, const Mask& b)
{
    if (a.empty()) return b;
    if (b.empty()) return a;
    Mask out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] || b[k];
    return out;
}

/// Replaces masked samples by linear interpolation between the nearest
/// unmasked neighbours; samples before the first / after the last valid one
/// take the nearest valid value. A fully masked vector is left untouched.
template <typename T>
void fill_masked(std::vector<T>& v, const Mask& mask)
{
    if (mask.empty()) return;
    const std::size_t n = v.size();
    std::size_t prev = n;  // index of last valid sample, n = none yet
    std::size_t k = 0;
    while (k < n) {
        if (!mask[k]) {
            prev = k;
            ++k;
            continue;
        }
        std::size_t next = k;
        while (next < n && mask[next]) ++next;
        for (std::size_t j = k; j < next; ++j) {
            if (prev == n && next == n) return;
            if (prev == n) v[j] = v[next];
            else if (next == n) v[j] = v[prev];
            else {
                const double w = static_cast<double>(j - prev) / static_cast<double>(next - prev);
                v[j] = v[prev] * (1.0 - w) + v[next] * w;
            }
        }
        k = next;
    }
}

/// Radians per time unit to cycles per time unit.
inline constexpr double to_cycles(double radian_frequency) { return radian_frequency / two_pi; }
inline constexpr double to_radians(double cyclic_frequency) { return cyclic_frequency * two_pi; }

} // namespace bivar

#endif // BIVAR_SERIES_HPP
