// SPDX-License-Identifier: Apache-2.0
//
// Modulated elliptical signals: conversions between the Cartesian analytic
// pair [x+, y+], the rotary pair [z+, z-] and the ellipse parameters
// (kappa, lambda, theta, phi, r_z), plus synthesis, frozen-ellipse snapshots
// and the closed-form moments of the Cartesian and rotary components.
//
// Conventions
//   z+ = (x+ + i y+)/2, z- = (x+ - i y+)/2, both stored as analytic signals.
//   a = a+ + a-, b = a+ - a-, phi = (phi+ + phi-)/2, theta = (phi+ - phi-)/2.
//   kappa = sqrt((a^2 + b^2)/2), lambda = r_z (a^2 - b^2)/(a^2 + b^2).
//   theta and phi are stored unwrapped; `theta_normalized()` folds the
//   orientation into (-pi/2, pi/2] and shifts phi by the same multiple of pi.

#ifndef BIVAR_ELLIPSE_HPP
#define BIVAR_ELLIPSE_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "bivar/series.hpp"
#include "bivar/spectral.hpp"

namespace bivar {

struct CartesianPair {
    AnalyticSeries xp;
    AnalyticSeries yp;
};

struct RotaryPair {
    AnalyticSeries zp;  ///< counterclockwise part
    AnalyticSeries zn;  ///< clockwise part, stored as an analytic signal
};

struct EllipseSeries {
    RealSeries kappa;
    RealSeries lambda;
    RealSeries theta;  ///< unwrapped orientation
    RealSeries phi;    ///< unwrapped orbital phase
    int rz = 1;
    Mask mask;

    bool rz_tie = false;            ///< sign of a+ - a- was exactly zero (linear signal)
    std::size_t rz_conflicts = 0;   ///< samples whose rotation sense opposes rz

    const SampleGrid& grid() const { return kappa.grid; }
    std::size_t size() const { return kappa.size(); }
    bool masked(std::size_t k) const { return !mask.empty() && mask[k]; }

    double semi_major(std::size_t k) const { return kappa[k] * std::sqrt(1.0 + std::abs(lambda[k])); }
    /// Signed semi-minor axis, sign = rz.
    double semi_minor(std::size_t k) const
    {
        return rz * kappa[k] * std::sqrt(std::max(0.0, 1.0 - std::abs(lambda[k])));
    }
    double eccentricity(std::size_t k) const
    {
        const double a = semi_major(k), b = semi_minor(k);
        return a > 0.0 ? std::sqrt(std::max(0.0, 1.0 - b * b / (a * a))) : 0.0;
    }

    /// Orientation folded into (-pi/2, pi/2].
    std::vector<double> theta_normalized() const
    {
        std::vector<double> out(size());
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = theta[k] - pi * half_turns(theta[k]);
        return out;
    }
    /// Orbital phase in (-pi, pi] after absorbing the pi shifts of theta_normalized().
    std::vector<double> phi_normalized() const
    {
        std::vector<double> out(size());
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = wrap_to_pi(phi[k] - pi * half_turns(theta[k]));
        return out;
    }

    static double half_turns(double angle)
    {
        // smallest m with angle - m pi in (-pi/2, pi/2]
        return std::ceil(angle / pi - 0.5);
    }
};

/// Validates and packages ellipse parameter tracks.
inline EllipseSeries make_ellipse(const SampleGrid& grid, std::vector<double> kappa, std::vector<double> lambda,
                                  std::vector<double> theta, std::vector<double> phi, int rz)
{
    grid.validate();
    if (rz != 1 && rz != -1) throw std::invalid_argument("ellipse: rz must be +1 or -1");
    for (std::size_t k = 0; k < kappa.size(); ++k) {
        if (!(kappa[k] >= 0.0)) throw std::invalid_argument("ellipse: kappa must be nonnegative");
        if (!(std::abs(lambda[k]) <= 1.0)) throw std::invalid_argument("ellipse: |lambda| must not exceed 1");
    }
    EllipseSeries e;
    e.kappa = RealSeries(grid, std::move(kappa));
    e.lambda = RealSeries(grid, std::move(lambda));
    e.theta = RealSeries(grid, std::move(theta));
    e.phi = RealSeries(grid, std::move(phi));
    e.kappa.require_finite("ellipse kappa");
    e.lambda.require_finite("ellipse lambda");
    e.theta.require_finite("ellipse theta");
    e.phi.require_finite("ellipse phi");
    e.rz = rz;
    return e;
}

inline RotaryPair cartesian_to_rotary(const CartesianPair& c)
{
    require_same_grid(c.xp.grid, c.yp.grid, "cartesian_to_rotary");
    const std::size_t n = c.xp.size();
    std::vector<complex> zp(n), zn(n);
    const complex i(0.0, 1.0);
    for (std::size_t k = 0; k < n; ++k) {
        zp[k] = 0.5 * (c.xp[k] + i * c.yp[k]);
        zn[k] = 0.5 * (c.xp[k] - i * c.yp[k]);
    }
    const Mask m = merge_masks(c.xp.mask, c.yp.mask);
    return {AnalyticSeries(c.xp.grid, std::move(zp), m), AnalyticSeries(c.xp.grid, std::move(zn), m)};
}

inline CartesianPair rotary_to_cartesian(const RotaryPair& r)
{
    require_same_grid(r.zp.grid, r.zn.grid, "rotary_to_cartesian");
    const std::size_t n = r.zp.size();
    std::vector<complex> xp(n), yp(n);
    const complex i(0.0, 1.0);
    for (std::size_t k = 0; k < n; ++k) {
        xp[k] = r.zp[k] + r.zn[k];
        yp[k] = -i * (r.zp[k] - r.zn[k]);
    }
    const Mask m = merge_masks(r.zp.mask, r.zn.mask);
    return {AnalyticSeries(r.zp.grid, std::move(xp), m), AnalyticSeries(r.zp.grid, std::move(yp), m)};
}

namespace detail {

/// Unwraps the phase of `z` over the samples flagged valid and interpolates
/// the rest. Returns false if no sample is valid.
inline bool unwrapped_phase(const AnalyticSeries& z, const std::vector<bool>& valid, std::vector<double>& out)
{
    const std::size_t n = z.size();
    std::vector<double> args;
    std::vector<std::size_t> where;
    for (std::size_t k = 0; k < n; ++k)
        if (valid[k]) {
            args.push_back(std::arg(z[k]));
            where.push_back(k);
        }
    out.assign(n, 0.0);
    if (where.empty()) return false;
    const auto uw = unwrap(args);
    Mask gaps(n, true);
    for (std::size_t i = 0; i < where.size(); ++i) {
        out[where[i]] = uw[i];
        gaps[where[i]] = false;
    }
    fill_masked(out, gaps);
    return true;
}

inline double median(std::vector<double> v)
{
    if (v.empty()) return 0.0;
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (v.size() % 2 == 1) return *mid;
    const double upper = *mid;
    const double lower = *std::max_element(v.begin(), mid);
    return 0.5 * (lower + upper);
}

} // namespace detail

/// Ellipse parameters from a rotary pair.
///
/// The rotation sense rz is the sign of the median of a+ - a- (ties give +1
/// and set `rz_tie`). Samples where a+ + a- falls below the amplitude floor
/// are masked. Where only one rotary component is present the orientation is
/// unobservable: theta is interpolated from neighbouring samples (0 if none)
/// and the observable phase phi + rz theta is preserved.
inline EllipseSeries rotary_to_ellipse(const RotaryPair& r)
{
    require_same_grid(r.zp.grid, r.zn.grid, "rotary_to_ellipse");
    r.zp.grid.validate();
    const std::size_t n = r.zp.size();
    std::vector<double> ap(n), an(n);
    double peak = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        ap[k] = std::abs(r.zp[k]);
        an[k] = std::abs(r.zn[k]);
        peak = std::max(peak, ap[k] + an[k]);
    }
    const double floor = amplitude_floor * peak;
    const Mask in_mask = merge_masks(r.zp.mask, r.zn.mask);

    EllipseSeries e;
    e.mask.assign(n, false);
    std::vector<bool> valid_p(n), valid_n(n);
    std::vector<double> diffs;
    for (std::size_t k = 0; k < n; ++k) {
        const bool bad = (ap[k] + an[k] < floor) || peak == 0.0 || (!in_mask.empty() && in_mask[k]);
        e.mask[k] = bad;
        valid_p[k] = !bad && ap[k] >= floor;
        valid_n[k] = !bad && an[k] >= floor;
        if (!bad) diffs.push_back(ap[k] - an[k]);
    }
    const double med = detail::median(diffs);
    e.rz = med < 0.0 ? -1 : 1;
    e.rz_tie = (med == 0.0);
    for (double d : diffs)
        if (d * e.rz < 0.0) ++e.rz_conflicts;

    std::vector<double> php, phn;
    const bool has_p = detail::unwrapped_phase(r.zp, valid_p, php);
    const bool has_n = detail::unwrapped_phase(r.zn, valid_n, phn);

    std::vector<double> kappa(n), lambda(n), theta(n, 0.0), phi(n, 0.0);
    Mask theta_gap(n, true);
    for (std::size_t k = 0; k < n; ++k) {
        const double p2 = ap[k] * ap[k] + an[k] * an[k];
        kappa[k] = std::sqrt(p2);
        lambda[k] = p2 > 0.0 ? e.rz * 2.0 * ap[k] * an[k] / p2 : 0.0;
        if (valid_p[k] && valid_n[k]) {
            theta[k] = 0.5 * (php[k] - phn[k]);
            theta_gap[k] = false;
        }
    }
    fill_masked(theta, theta_gap);
    Mask phi_gap(n, false);
    for (std::size_t k = 0; k < n; ++k) {
        if (valid_p[k] && valid_n[k]) phi[k] = 0.5 * (php[k] + phn[k]);
        else if (valid_p[k]) phi[k] = php[k] - theta[k];
        else if (valid_n[k]) phi[k] = phn[k] + theta[k];
        else phi_gap[k] = true;
    }
    fill_masked(phi, phi_gap);
    if (!has_p && !has_n) std::fill(phi.begin(), phi.end(), 0.0);

    const auto& g = r.zp.grid;
    e.kappa = RealSeries(g, std::move(kappa), e.mask);
    e.lambda = RealSeries(g, std::move(lambda), e.mask);
    e.theta = RealSeries(g, std::move(theta), e.mask);
    e.phi = RealSeries(g, std::move(phi), e.mask);
    return e;
}

/// Rotary amplitudes a+- = (kappa/sqrt2) sqrt(1 +- rz sqrt(1 - lambda^2)).
inline std::pair<double, double> rotary_amplitudes(double kappa, double lambda, int rz)
{
    const double l2 = std::min(1.0, lambda * lambda);
    const double s = std::sqrt(1.0 - l2);
    const double big = 1.0 + s;
    const double small = l2 / (1.0 + s);  // 1 - s without cancellation
    const double c = kappa / std::sqrt(2.0);
    const double strong = c * std::sqrt(big), weak = c * std::sqrt(small);
    return rz > 0 ? std::pair{strong, weak} : std::pair{weak, strong};
}

inline RotaryPair ellipse_to_rotary(const EllipseSeries& e)
{
    const std::size_t n = e.size();
    std::vector<complex> zp(n), zn(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto [ap, an] = rotary_amplitudes(e.kappa[k], e.lambda[k], e.rz);
        zp[k] = std::polar(ap, e.phi[k] + e.theta[k]);
        zn[k] = std::polar(an, e.phi[k] - e.theta[k]);
    }
    return {AnalyticSeries(e.grid(), std::move(zp), e.mask), AnalyticSeries(e.grid(), std::move(zn), e.mask)};
}

/// Real trajectory and the model's Cartesian analytic pair.
struct EllipseSynthesis {
    RealSeries x;
    RealSeries y;
    CartesianPair analytic;
};

/// z(t) = e^{i theta}(a cos phi + i b sin phi); the analytic pair is
/// [x+, y+] = e^{i phi} J(theta) [a, -i b], built from the model phases.
inline EllipseSynthesis synthesize(const EllipseSeries& e)
{
    const std::size_t n = e.size();
    std::vector<double> x(n), y(n);
    std::vector<complex> xp(n), yp(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double a = e.semi_major(k), b = e.semi_minor(k);
        const double ct = std::cos(e.theta[k]), st = std::sin(e.theta[k]);
        const complex orbit = std::polar(1.0, e.phi[k]);
        xp[k] = orbit * complex(a * ct, b * st);
        yp[k] = orbit * complex(a * st, -b * ct);
        const complex z = std::polar(1.0, e.theta[k]) * complex(a * std::cos(e.phi[k]), b * std::sin(e.phi[k]));
        x[k] = z.real();
        y[k] = z.imag();
    }
    const auto& g = e.grid();
    return {RealSeries(g, std::move(x), e.mask), RealSeries(g, std::move(y), e.mask),
            {AnalyticSeries(g, std::move(xp), e.mask), AnalyticSeries(g, std::move(yp), e.mask)}};
}

inline RealSeries orbital_frequency(const EllipseSeries& e) { return derivative(e.phi); }
inline RealSeries precession_rate(const EllipseSeries& e) { return derivative(e.theta); }

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct EllipseSnapshot {
    Point center;
    std::vector<Point> polyline;  ///< closed: last point equals the first
    double timestamp = 0.0;
    double period = 0.0;          ///< 2 pi / |omega_phi|
};

/// Frozen ellipse at sample `t_index`: the geometry is held fixed while the
/// orbital phase advances through one full turn in `n_points` steps.
inline EllipseSnapshot snapshot(const EllipseSeries& e, std::size_t t_index, std::size_t n_points,
                                Point center = {})
{
    if (t_index >= e.size()) throw std::out_of_range("snapshot: time index outside the record");
    if (n_points < 3) throw std::invalid_argument("snapshot: need at least 3 points");
    if (e.masked(t_index)) throw std::invalid_argument("snapshot: sample " + std::to_string(t_index) + " is masked");
    const double omega_phi = orbital_frequency(e)[t_index];
    if (!(std::abs(omega_phi) > 1e-14))
        throw std::invalid_argument("snapshot: zero orbital frequency at sample " + std::to_string(t_index));

    EllipseSnapshot s;
    s.center = center;
    s.timestamp = e.grid().time(t_index);
    s.period = two_pi / std::abs(omega_phi);
    const double a = e.semi_major(t_index), b = e.semi_minor(t_index);
    const complex rot = std::polar(1.0, e.theta[t_index]);
    s.polyline.reserve(n_points + 1);
    for (std::size_t j = 0; j < n_points; ++j) {
        const double ph = e.phi[t_index] + two_pi * static_cast<double>(j) / static_cast<double>(n_points);
        const complex z = rot * complex(a * std::cos(ph), b * std::sin(ph));
        s.polyline.push_back({center.x + z.real(), center.y + z.imag()});
    }
    s.polyline.push_back(s.polyline.front());
    return s;
}

/// Amplitudes and unwrapped phases of x+ and y+ written in ellipse parameters.
struct CartesianParams {
    RealSeries ax, ay, phix, phiy;
};

inline CartesianParams cartesian_params_from_ellipse(const EllipseSeries& e)
{
    const std::size_t n = e.size();
    std::vector<double> ax(n), ay(n), px(n), py(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double l = std::abs(e.lambda[k]);
        const double c2 = std::cos(2.0 * e.theta[k]);
        ax[k] = e.kappa[k] * std::sqrt(std::max(0.0, 1.0 + l * c2));
        ay[k] = e.kappa[k] * std::sqrt(std::max(0.0, 1.0 - l * c2));
        const double a = e.semi_major(k), bb = std::abs(e.semi_minor(k));
        const double ct = std::cos(e.theta[k]), st = std::sin(e.theta[k]);
        px[k] = e.phi[k] + std::arg(complex(a * ct, e.rz * bb * st));
        py[k] = e.phi[k] - e.rz * pi / 2.0 + std::arg(complex(bb * ct, e.rz * a * st));
    }
    const auto& g = e.grid();
    return {RealSeries(g, std::move(ax), e.mask), RealSeries(g, std::move(ay), e.mask),
            RealSeries(g, unwrap(px), e.mask), RealSeries(g, unwrap(py), e.mask)};
}

struct CartesianMoments {
    RealSeries omega_x, omega_y, upsilon_x, upsilon_y;
};

namespace detail {

inline std::vector<double> log_of(const RealSeries& s)
{
    double peak = 0.0;
    for (double v : s.values) peak = std::max(peak, v);
    std::vector<double> out(s.size());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = std::log(std::max(s[k], amplitude_floor * peak + 1e-300));
    return out;
}

struct EllipseRates {
    std::vector<double> omega_phi, omega_theta, dlog_kappa;
};

inline EllipseRates rates(const EllipseSeries& e)
{
    const double dt = e.grid().dt;
    return {derivative<double>(e.phi.values, dt), derivative<double>(e.theta.values, dt),
            derivative<double>(log_of(e.kappa), dt)};
}

} // namespace detail

/// Closed-form Cartesian instantaneous frequencies and bandwidths. Samples
/// where either Cartesian amplitude vanishes, or |lambda| = 1, are masked.
inline CartesianMoments cartesian_moments_from_ellipse(const EllipseSeries& e)
{
    const std::size_t n = e.size();
    const double dt = e.grid().dt;
    const auto r = detail::rates(e);
    std::vector<double> abs_l(n);
    for (std::size_t k = 0; k < n; ++k) abs_l[k] = std::abs(e.lambda[k]);
    const auto dabs_l = derivative<double>(abs_l, dt);

    std::vector<double> wx(n), wy(n), ux(n), uy(n);
    Mask mask = e.mask.empty() ? Mask(n, false) : e.mask;
    for (std::size_t k = 0; k < n; ++k) {
        const double c2 = std::cos(2.0 * e.theta[k]), s2 = std::sin(2.0 * e.theta[k]);
        const double fx = 1.0 + abs_l[k] * c2, fy = 1.0 - abs_l[k] * c2;  // a_x^2 / kappa^2, a_y^2 / kappa^2
        const double s = std::sqrt(std::max(0.0, 1.0 - e.lambda[k] * e.lambda[k]));
        if (fx < 1e-10 || fy < 1e-10 || s < 1e-10) {
            mask[k] = true;
            continue;
        }
        const double precess = r.omega_theta[k] * s;
        const double deform = 0.5 * s2 / s * dabs_l[k];
        wx[k] = r.omega_phi[k] + e.rz / fx * (precess - deform);
        wy[k] = r.omega_phi[k] + e.rz / fy * (precess + deform);
        const double d_lc = dabs_l[k] * c2 - 2.0 * abs_l[k] * s2 * r.omega_theta[k];
        ux[k] = r.dlog_kappa[k] + 0.5 / fx * d_lc;
        uy[k] = r.dlog_kappa[k] - 0.5 / fy * d_lc;
    }
    for (auto* v : {&wx, &wy, &ux, &uy}) fill_masked(*v, mask);
    const auto& g = e.grid();
    return {RealSeries(g, std::move(wx), mask), RealSeries(g, std::move(wy), mask), RealSeries(g, std::move(ux), mask),
            RealSeries(g, std::move(uy), mask)};
}

struct RotaryMoments {
    RealSeries omega_p, omega_n, upsilon_p, upsilon_n;
};

/// Closed-form rotary frequencies omega+- = omega_phi +- omega_theta and
/// bandwidths upsilon+- = d ln kappa/dt +- (rz/2) (d/dt sqrt(1-lambda^2)) / (1 +- rz sqrt(1-lambda^2)).
/// The weaker component's bandwidth is masked where its denominator < 1e-10.
inline RotaryMoments rotary_moments_from_ellipse(const EllipseSeries& e)
{
    const std::size_t n = e.size();
    const auto r = detail::rates(e);
    std::vector<double> s(n);
    for (std::size_t k = 0; k < n; ++k) s[k] = std::sqrt(std::max(0.0, 1.0 - e.lambda[k] * e.lambda[k]));
    const auto ds = derivative<double>(s, e.grid().dt);

    std::vector<double> wp(n), wn(n), up(n), un(n);
    Mask mp = e.mask.empty() ? Mask(n, false) : e.mask;
    Mask mn = mp;
    for (std::size_t k = 0; k < n; ++k) {
        wp[k] = r.omega_phi[k] + r.omega_theta[k];
        wn[k] = r.omega_phi[k] - r.omega_theta[k];
        const double den_p = 1.0 + e.rz * s[k], den_n = 1.0 - e.rz * s[k];
        if (den_p < 1e-10) mp[k] = true;
        else up[k] = r.dlog_kappa[k] + 0.5 * e.rz * ds[k] / den_p;
        if (den_n < 1e-10) mn[k] = true;
        else un[k] = r.dlog_kappa[k] - 0.5 * e.rz * ds[k] / den_n;
    }
    fill_masked(up, mp);
    fill_masked(un, mn);
    const auto& g = e.grid();
    return {RealSeries(g, std::move(wp), e.mask), RealSeries(g, std::move(wn), e.mask), RealSeries(g, std::move(up), mp),
            RealSeries(g, std::move(un), mn)};
}

/// Rotates a Cartesian pair counterclockwise by `alpha`.
inline CartesianPair rotate(const CartesianPair& c, double alpha)
{
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    std::vector<complex> xp(c.xp.size()), yp(c.yp.size());
    for (std::size_t k = 0; k < xp.size(); ++k) {
        xp[k] = ca * c.xp[k] - sa * c.yp[k];
        yp[k] = sa * c.xp[k] + ca * c.yp[k];
    }
    return {AnalyticSeries(c.xp.grid, std::move(xp), c.xp.mask), AnalyticSeries(c.yp.grid, std::move(yp), c.yp.mask)};
}

} // namespace bivar

#endif // BIVAR_ELLIPSE_HPP
