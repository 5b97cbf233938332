// SPDX-License-Identifier: Apache-2.0
//
// Scoring helpers for comparing estimates against known truth.

#ifndef BIVAR_PIPELINE_METRICS_HPP
#define BIVAR_PIPELINE_METRICS_HPP

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bivar/series.hpp"

namespace bivar::pipeline {

/// Half-open index range [lo, hi) of the central `fraction` of n samples.
inline std::pair<std::size_t, std::size_t> central_range(std::size_t n, double fraction = 0.8)
{
    const auto cut = static_cast<std::size_t>(std::floor(static_cast<double>(n) * (1.0 - fraction) / 2.0));
    return {cut, n - cut};
}

/// sqrt(sum (est - ref)^2 / sum ref^2) over [lo, hi), skipping `mask`ed samples.
inline double relative_rms(const std::vector<double>& est, const std::vector<double>& ref, std::size_t lo,
                           std::size_t hi, const Mask& mask = {})
{
    double num = 0.0, den = 0.0;
    for (std::size_t k = lo; k < hi; ++k) {
        if (!mask.empty() && mask[k]) continue;
        num += (est[k] - ref[k]) * (est[k] - ref[k]);
        den += ref[k] * ref[k];
    }
    if (!(den > 0.0)) throw std::invalid_argument("relative_rms: reference is zero");
    return std::sqrt(num / den);
}

/// max |est/ref - 1| over [lo, hi), skipping `mask`ed samples.
inline double max_relative_error(const std::vector<double>& est, const std::vector<double>& ref, std::size_t lo,
                                 std::size_t hi, const Mask& mask = {})
{
    double worst = 0.0;
    for (std::size_t k = lo; k < hi; ++k) {
        if (!mask.empty() && mask[k]) continue;
        worst = std::max(worst, std::abs(est[k] - ref[k]) / std::abs(ref[k]));
    }
    return worst;
}

/// Pearson correlation over [lo, hi).
inline double correlation(const std::vector<double>& a, const std::vector<double>& b, std::size_t lo, std::size_t hi)
{
    if (hi <= lo + 1) throw std::invalid_argument("correlation: need at least 2 samples");
    double ma = 0.0, mb = 0.0;
    for (std::size_t k = lo; k < hi; ++k) {
        ma += a[k];
        mb += b[k];
    }
    const double m = static_cast<double>(hi - lo);
    ma /= m;
    mb /= m;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t k = lo; k < hi; ++k) {
        sab += (a[k] - ma) * (b[k] - mb);
        saa += (a[k] - ma) * (a[k] - ma);
        sbb += (b[k] - mb) * (b[k] - mb);
    }
    if (!(saa > 0.0) || !(sbb > 0.0)) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

inline double correlation(const std::vector<double>& a, const std::vector<double>& b)
{
    return correlation(a, b, 0, a.size());
}

} // namespace bivar::pipeline

#endif // BIVAR_PIPELINE_METRICS_HPP
