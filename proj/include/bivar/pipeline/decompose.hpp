// SPDX-License-Identifier: Apache-2.0
//
// Split an observed bivariate record into a modulated elliptical signal,
// estimated by wavelet ridges, and a residual defined by subtraction.

#ifndef BIVAR_PIPELINE_DECOMPOSE_HPP
#define BIVAR_PIPELINE_DECOMPOSE_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "bivar/ellipse.hpp"
#include "bivar/joint_moments.hpp"
#include "bivar/pipeline/record.hpp"
#include "bivar/ridge.hpp"
#include "bivar/wavelet.hpp"

namespace bivar::pipeline {

struct DecomposeConfig {
    MorseParams morse{3.0, 3.0};
    std::size_t bands = 50;
    double period_min = 2.6;  ///< time units
    double period_max = 53.0;
    double min_ridge_periods = 2.0;
    Padding pad = Padding::mirror;
    bool trim_coi = false;
    double min_modulus = 0.0;
    double noise_std = 0.0;  ///< white-noise level for the ridge noise floor; 0 = off
    double snr_floor = 2.0;

    ScaleGrid scale_grid() const { return ScaleGrid::from_periods(period_min, period_max, bands); }
};

/// The estimated signal with everything derived from it.
struct Decomposition {
    BivariateRecord signal;
    BivariateRecord residual;
    CartesianPair analytic;  ///< [x+, y+] of the signal
    EllipseSeries ellipse;
    JointMoments moments;    ///< frequency here is omega_z
    BandwidthDecomposition bandwidth;
    RealSeries omega_phi;
    RealSeries omega_theta;
    Mask mask;               ///< union of ellipse and moment masks

    bool empty = false;
    bool degenerate = false;
    std::size_t ridges_x = 0, ridges_y = 0, pairs = 0;
    std::vector<std::string> warnings;
};

/// Splits each observed sample into s + r with s close to `estimate` and
/// fl(s + r) equal to the observation bit for bit.
inline void split_exact(double observed, double estimate, double& s, double& r)
{
    r = observed - estimate;
    s = observed - r;
    for (int i = 0; i < 8 && s + r != observed; ++i) s = std::nextafter(s, s + (observed - (s + r)) * 2.0);
    if (s + r != observed) {
        s = 0.0;
        r = observed;
    }
}

/// Fills the moment fields of `d` from its analytic pair and ellipse.
inline void analyze(Decomposition& d)
{
    const auto& g = d.ellipse.grid();
    const std::size_t n = g.n;
    d.omega_phi = orbital_frequency(d.ellipse);
    d.omega_theta = precession_rate(d.ellipse);
    d.bandwidth = bandwidth_decomposition(d.ellipse);
    if (d.empty) {
        d.moments.frequency = d.moments.bandwidth = d.moments.second_central = RealSeries(g, std::vector<double>(n), Mask(n, true));
        d.mask.assign(n, true);
        return;
    }
    d.moments = joint_moments(as_vector(d.analytic));
    d.mask = merge_masks(d.ellipse.mask, d.moments.frequency.mask);
    if (d.mask.empty()) d.mask.assign(n, false);
}

/// An all-zero, fully masked ellipse on `g`.
inline EllipseSeries null_ellipse(const SampleGrid& g)
{
    auto e = make_ellipse(g, std::vector<double>(g.n), std::vector<double>(g.n), std::vector<double>(g.n),
                          std::vector<double>(g.n), 1);
    e.mask.assign(g.n, true);
    return e;
}

inline Decomposition decompose(const BivariateRecord& rec, const DecomposeConfig& cfg = {})
{
    const auto& g = rec.grid();
    g.validate();
    if (!(g.duration() >= 4.0 * cfg.period_max))
        throw std::invalid_argument("decompose: record spans " + detail::format_number(g.duration()) +
                                    " time units, fewer than 4 cycles of the longest period " +
                                    detail::format_number(cfg.period_max));
    const auto scales = cfg.scale_grid();
    const auto wx = cwt(rec.x, scales, cfg.morse, cfg.pad);
    const auto wy = cwt(rec.y, scales, cfg.morse, cfg.pad);
    RidgeOptions opt;
    opt.min_periods = cfg.min_ridge_periods;
    opt.trim_coi = cfg.trim_coi;
    opt.min_modulus = cfg.min_modulus;
    opt.noise_std = cfg.noise_std;
    opt.snr_floor = cfg.snr_floor;
    const auto rx = ridge_detect(wx, opt);
    const auto ry = ridge_detect(wy, opt);
    auto est = combine_bivariate_ridges(rx, ry, g);

    Decomposition d;
    d.ridges_x = rx.size();
    d.ridges_y = ry.size();
    d.pairs = est.pairs;
    d.empty = est.empty;
    d.degenerate = est.degenerate;
    d.warnings = est.warnings;
    d.analytic = std::move(est.pair);
    d.ellipse = d.empty ? null_ellipse(g) : std::move(est.ellipse);

    const std::size_t n = g.n;
    std::vector<double> sx(n), sy(n), ex(n), ey(n);
    for (std::size_t k = 0; k < n; ++k) {
        split_exact(rec.x[k], d.analytic.xp[k].real(), sx[k], ex[k]);
        split_exact(rec.y[k], d.analytic.yp[k].real(), sy[k], ey[k]);
    }
    d.signal = rec;
    d.signal.x = RealSeries(g, std::move(sx));
    d.signal.y = RealSeries(g, std::move(sy));
    d.residual = rec;
    d.residual.x = RealSeries(g, std::move(ex));
    d.residual.y = RealSeries(g, std::move(ey));
    analyze(d);
    return d;
}

} // namespace bivar::pipeline

#endif // BIVAR_PIPELINE_DECOMPOSE_HPP
