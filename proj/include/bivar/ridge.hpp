// SPDX-License-Identifier: Apache-2.0
//
// Amplitude ridges of a wavelet transform and their combination into a
// bivariate estimate.

#ifndef BIVAR_RIDGE_HPP
#define BIVAR_RIDGE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "bivar/ellipse.hpp"
#include "bivar/series.hpp"
#include "bivar/wavelet.hpp"

namespace bivar {

/// A contiguous chain of scale maxima. Sample i of the ridge sits at time
/// index `first + i`.
struct RidgeCurve {
    std::size_t first = 0;
    std::vector<double> scale_index;     ///< refined, fractional band index
    std::vector<double> inst_frequency;  ///< rad / time unit at the refined scale
    std::vector<complex> values;         ///< transform value at the refined scale

    std::size_t length() const { return values.size(); }
    std::size_t last() const { return first + length() - 1; }
    std::size_t end() const { return first + length(); }
    bool covers(std::size_t k) const { return k >= first && k < end(); }

    double mean_frequency() const
    {
        double s = 0.0;
        for (double f : inst_frequency) s += f;
        return inst_frequency.empty() ? 0.0 : s / static_cast<double>(inst_frequency.size());
    }
};

struct RidgeOptions {
    /// Shortest kept ridge in samples; 0 selects `min_periods` periods at the
    /// ridge's mean frequency.
    std::size_t min_length = 0;
    double min_periods = 2.0;
    bool trim_coi = false;
    /// Points with |W| at or below this are ignored.
    double min_modulus = 0.0;
    /// Standard deviation of additive white noise; 0 disables the noise floor.
    double noise_std = 0.0;
    /// With noise_std set, points need |W| above snr_floor times the RMS
    /// modulus white noise of that level produces at their scale.
    double snr_floor = 2.0;
    /// Largest scale jump, in bands, between neighbouring ridge points.
    double chain_window = 1.5;
};

struct RidgePoint {
    std::size_t time;
    double index;
    double modulus;
    complex value;
};

namespace detail {

/// Parabolic peak offset in (-1/2, 1/2] through three samples of a log modulus.
inline double parabolic_offset(double ym, double y0, double yp)
{
    const double den = ym - 2.0 * y0 + yp;
    if (!(den < 0.0)) return 0.0;
    return std::clamp(0.5 * (ym - yp) / den, -0.5, 0.5);
}

/// Second-order Lagrange interpolation through j-1, j, j+1 at j + d.
inline complex quadratic_value(const complex& vm, const complex& v0, const complex& vp, double d)
{
    return vm * (d * (d - 1.0) / 2.0) + v0 * (1.0 - d * d) + vp * (d * (d + 1.0) / 2.0);
}

} // namespace detail

/// Interior modulus maxima over scale at time k, refined in log modulus.
inline std::vector<RidgePoint> ridge_points(const WaveletTransform& w, std::size_t k, const RidgeOptions& opt = {})
{
    std::vector<RidgePoint> pts;
    const std::size_t J = w.n_scales();
    for (std::size_t j = 1; j + 1 < J; ++j) {
        const double am = std::abs(w.at(j - 1, k)), a0 = std::abs(w.at(j, k)), ap = std::abs(w.at(j + 1, k));
        if (!(a0 > am && a0 >= ap) || !(a0 > opt.min_modulus)) continue;
        if (opt.noise_std > 0.0 && !(a0 > opt.snr_floor * opt.noise_std * w.noise_gain[j])) continue;
        const double d = (am > 0.0 && ap > 0.0) ? detail::parabolic_offset(std::log(am), std::log(a0), std::log(ap))
                                                : 0.0;
        const complex v = detail::quadratic_value(w.at(j - 1, k), w.at(j, k), w.at(j + 1, k), d);
        pts.push_back({k, static_cast<double>(j) + d, std::abs(v), v});
    }
    return pts;
}

/// Chains per-time scale maxima into ridges. At each time, points are taken
/// in order of decreasing modulus; each joins the open ridge whose last
/// refined scale is nearest and within the chaining window, or starts a new
/// ridge.
inline std::vector<RidgeCurve> ridge_detect(const WaveletTransform& w, const RidgeOptions& opt = {})
{
    std::vector<RidgeCurve> done, open;
    const std::size_t n = w.n_times();
    const auto add = [&](RidgeCurve& r, const RidgePoint& p) {
        r.scale_index.push_back(p.index);
        r.inst_frequency.push_back(w.scales.frequency_at(p.index));
        r.values.push_back(p.value);
    };
    for (std::size_t k = 0; k < n; ++k) {
        auto pts = ridge_points(w, k, opt);
        std::stable_sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.modulus > b.modulus; });
        std::vector<bool> extended(open.size(), false);
        std::vector<RidgeCurve> started;
        for (const auto& p : pts) {
            std::size_t best = open.size();
            double best_gap = opt.chain_window;
            for (std::size_t r = 0; r < open.size(); ++r) {
                if (extended[r]) continue;
                const double gap = std::abs(open[r].scale_index.back() - p.index);
                if (gap <= best_gap) {
                    best_gap = gap;
                    best = r;
                }
            }
            if (best < open.size()) {
                add(open[best], p);
                extended[best] = true;
            } else {
                RidgeCurve r;
                r.first = k;
                add(r, p);
                started.push_back(std::move(r));
            }
        }
        std::vector<RidgeCurve> still;
        for (std::size_t r = 0; r < open.size(); ++r)
            (extended[r] ? still : done).push_back(std::move(open[r]));
        for (auto& r : started) still.push_back(std::move(r));
        open = std::move(still);
    }
    for (auto& r : open) done.push_back(std::move(r));

    std::vector<RidgeCurve> kept;
    for (auto& r : done) {
        if (opt.trim_coi) {
            std::size_t lo = 0, hi = r.length();
            const double t_end = static_cast<double>(n - 1) * w.grid.dt;
            const auto inside = [&](std::size_t i) {
                const double j = std::clamp(r.scale_index[i], 0.0, static_cast<double>(w.n_scales() - 1));
                const double coi = w.coi[static_cast<std::size_t>(std::lround(j))];
                const double t = static_cast<double>(r.first + i) * w.grid.dt;
                return t >= coi && t_end - t >= coi;
            };
            while (lo < hi && !inside(lo)) ++lo;
            while (hi > lo && !inside(hi - 1)) --hi;
            if (lo == hi) continue;
            RidgeCurve t;
            t.first = r.first + lo;
            t.scale_index.assign(r.scale_index.begin() + static_cast<std::ptrdiff_t>(lo),
                                 r.scale_index.begin() + static_cast<std::ptrdiff_t>(hi));
            t.inst_frequency.assign(r.inst_frequency.begin() + static_cast<std::ptrdiff_t>(lo),
                                    r.inst_frequency.begin() + static_cast<std::ptrdiff_t>(hi));
            t.values.assign(r.values.begin() + static_cast<std::ptrdiff_t>(lo),
                            r.values.begin() + static_cast<std::ptrdiff_t>(hi));
            r = std::move(t);
        }
        double need = static_cast<double>(opt.min_length);
        if (opt.min_length == 0) need = opt.min_periods * two_pi / r.mean_frequency() / w.grid.dt;
        if (static_cast<double>(r.length()) >= need && r.length() >= 2) kept.push_back(std::move(r));
    }
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first < b.first : a.scale_index.front() < b.scale_index.front();
    });
    return kept;
}

/// Transform values along the ridge, exact zeros elsewhere.
inline AnalyticSeries ridge_to_analytic(const RidgeCurve& r, const SampleGrid& grid)
{
    if (r.length() == 0) throw std::invalid_argument("ridge_to_analytic: empty ridge");
    if (r.end() > grid.n) throw std::invalid_argument("ridge_to_analytic: ridge extends past the grid");
    std::vector<complex> v(grid.n, complex(0.0));
    std::copy(r.values.begin(), r.values.end(), v.begin() + static_cast<std::ptrdiff_t>(r.first));
    return AnalyticSeries(grid, std::move(v));
}

/// Result of combining ridges of x and y.
struct BivariateEstimate {
    CartesianPair pair;
    EllipseSeries ellipse;
    std::size_t pairs = 0;   ///< ridge pairs used
    bool degenerate = false; ///< only one component carried a ridge
    bool empty = false;      ///< no ridges at all
    std::vector<std::string> warnings;
};

inline std::size_t ridge_overlap(const RidgeCurve& a, const RidgeCurve& b)
{
    const std::size_t lo = std::max(a.first, b.first), hi = std::min(a.end(), b.end());
    return hi > lo ? hi - lo : 0;
}

/// Pairs x and y ridges by greatest overlap. A pair is kept when its overlap
/// is at least half of each ridge; pairs whose supports intersect an
/// already kept pair are dropped. The kept pairs are summed into x+ and y+
/// (a component is zero where its ridge is absent). Without any pair, the
/// longest single ridge gives a linear (|lambda| = 1) estimate.
inline BivariateEstimate combine_bivariate_ridges(const std::vector<RidgeCurve>& rx, const std::vector<RidgeCurve>& ry,
                                                  const SampleGrid& grid)
{
    struct Cand {
        std::size_t i, j, overlap;
    };
    std::vector<Cand> cands;
    for (std::size_t i = 0; i < rx.size(); ++i)
        for (std::size_t j = 0; j < ry.size(); ++j) {
            const std::size_t ov = ridge_overlap(rx[i], ry[j]);
            if (2 * ov >= rx[i].length() && 2 * ov >= ry[j].length() && ov > 0) cands.push_back({i, j, ov});
        }
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.overlap > b.overlap; });

    std::vector<complex> xs(grid.n, complex(0.0)), ys(grid.n, complex(0.0));
    std::vector<std::pair<std::size_t, std::size_t>> used;  // [lo, hi) of kept pairs
    BivariateEstimate est;
    for (const auto& c : cands) {
        const std::size_t lo = std::min(rx[c.i].first, ry[c.j].first), hi = std::max(rx[c.i].end(), ry[c.j].end());
        bool clash = false;
        for (const auto& [ulo, uhi] : used)
            if (lo < uhi && ulo < hi) clash = true;
        if (clash) continue;
        used.emplace_back(lo, hi);
        for (std::size_t k = 0; k < rx[c.i].length(); ++k) xs[rx[c.i].first + k] += rx[c.i].values[k];
        for (std::size_t k = 0; k < ry[c.j].length(); ++k) ys[ry[c.j].first + k] += ry[c.j].values[k];
        ++est.pairs;
    }
    if (est.pairs == 0) {
        const RidgeCurve* best = nullptr;
        bool from_x = true;
        for (const auto& r : rx)
            if (!best || r.length() > best->length()) best = &r;
        for (const auto& r : ry)
            if (!best || r.length() > best->length()) {
                best = &r;
                from_x = false;
            }
        if (!best) {
            est.empty = true;
            est.warnings.push_back("no ridges found in either component");
        } else {
            est.degenerate = true;
            est.warnings.push_back(std::string("no overlapping ridge pair; using the single ") + (from_x ? "x" : "y") +
                                   " ridge (linear estimate)");
            auto& dst = from_x ? xs : ys;
            for (std::size_t k = 0; k < best->length(); ++k) dst[best->first + k] = best->values[k];
        }
    }
    est.pair = {AnalyticSeries(grid, std::move(xs)), AnalyticSeries(grid, std::move(ys))};
    if (!est.empty) est.ellipse = rotary_to_ellipse(cartesian_to_rotary(est.pair));
    return est;
}

} // namespace bivar

#endif // BIVAR_RIDGE_HPP
