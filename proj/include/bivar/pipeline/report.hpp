// SPDX-License-Identifier: Apache-2.0
//
// Report files for a decomposition: moments.json, series.csv,
// snapshots.csv, trajectory.svg and moments.svg. The stability figure for
// the three single-term presets is written by `stability_svg`.

#ifndef BIVAR_PIPELINE_REPORT_HPP
#define BIVAR_PIPELINE_REPORT_HPP

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bivar/ellipse.hpp"
#include "bivar/pipeline/decompose.hpp"
#include "bivar/pipeline/record.hpp"
#include "bivar/pipeline/svg.hpp"

namespace bivar::pipeline {

inline constexpr const char* report_schema = "bivar.moments/1";

/// Snapshot times: from the first usable sample, each next snapshot follows
/// after twice the local period 2 pi / |omega_z| (rounded to a sample).
/// Masked samples are skipped.
inline std::vector<std::size_t> snapshot_indices(const Decomposition& d)
{
    std::vector<std::size_t> out;
    const auto& w = d.moments.frequency;
    const std::size_t n = w.size();
    const double dt = w.grid.dt;
    std::size_t k = 0;
    while (k < n) {
        if (d.mask[k] || !(std::abs(w[k]) > 0.0)) {
            ++k;
            continue;
        }
        out.push_back(k);
        const double step = 2.0 * two_pi / std::abs(w[k]) / dt;
        k += std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(step)));
    }
    return out;
}

/// Series drawn in the five moment panels.
struct PanelSeries {
    std::vector<double> t;
    std::vector<double> x, y, kappa;                          ///< a
    std::vector<double> linearity;                            ///< b: |lambda|
    std::vector<double> omega_z, omega_phi, omega_theta;      ///< c: cycles / time unit
    std::vector<double> bw_kappa, bw_lambda, bw_theta;        ///< d: |upsilon_*|, 1 / time unit
    std::vector<double> nd_kappa, nd_lambda, nd_theta;        ///< e: panel d / |omega_z| (rad / time unit)
    Mask mask;
};

inline PanelSeries panel_series(const Decomposition& d)
{
    const std::size_t n = d.ellipse.size();
    PanelSeries p;
    p.mask = d.mask;
    for (std::size_t k = 0; k < n; ++k) {
        p.t.push_back(d.ellipse.grid().time(k));
        p.x.push_back(d.signal.x[k]);
        p.y.push_back(d.signal.y[k]);
        p.kappa.push_back(d.ellipse.kappa[k]);
        p.linearity.push_back(std::abs(d.ellipse.lambda[k]));
        const double wz = d.moments.frequency[k];
        p.omega_z.push_back(to_cycles(wz));
        p.omega_phi.push_back(to_cycles(d.omega_phi[k]));
        p.omega_theta.push_back(to_cycles(d.omega_theta[k]));
        const double bk = std::abs(d.bandwidth.amplitude_bw[k]), bl = std::abs(d.bandwidth.deformation_bw[k]),
                     bt = std::abs(d.bandwidth.precession_bw[k]);
        p.bw_kappa.push_back(bk);
        p.bw_lambda.push_back(bl);
        p.bw_theta.push_back(bt);
        const double aw = std::abs(wz);
        p.nd_kappa.push_back(bk / aw);
        p.nd_lambda.push_back(bl / aw);
        p.nd_theta.push_back(bt / aw);
    }
    return p;
}

namespace detail {

inline nlohmann::json per_unit(const RealSeries& s)
{
    std::vector<double> cyc(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) cyc[k] = to_cycles(s[k]);
    return {{"cycles", cyc}, {"rad", s.values}};
}

inline nlohmann::json to_json(const DecomposeConfig& c)
{
    return {{"beta", c.morse.beta},       {"gamma", c.morse.gamma},
            {"bands", c.bands},           {"period_min", c.period_min},
            {"period_max", c.period_max}, {"min_ridge_periods", c.min_ridge_periods},
            {"pad", to_string(c.pad)},    {"trim_coi", c.trim_coi},
            {"noise_std", c.noise_std},   {"snr_floor", c.snr_floor}};
}

inline void write_text(const std::filesystem::path& p, const std::string& text)
{
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + p.string() + "'");
    f << text;
    if (!f) throw std::runtime_error("error writing '" + p.string() + "'");
}

inline std::string fmt(double v) { return pipeline::detail::format_number(v); }

} // namespace detail

/// The JSON moments report. Frequencies and rates are given per time unit
/// both in cycles and in radians.
inline nlohmann::json moments_json(const Decomposition& d, const DecomposeConfig& cfg, const std::string& time_unit)
{
    using nlohmann::json;
    const auto& g = d.ellipse.grid();
    std::vector<double> t(g.n);
    for (std::size_t k = 0; k < g.n; ++k) t[k] = g.time(k);
    std::vector<int> mask(g.n);
    for (std::size_t k = 0; k < g.n; ++k) mask[k] = d.mask[k] ? 1 : 0;
    std::vector<double> s2cyc(g.n);
    for (std::size_t k = 0; k < g.n; ++k) s2cyc[k] = d.moments.second_central[k] / (two_pi * two_pi);
    const auto snaps = snapshot_indices(d);

    json j;
    j["schema"] = report_schema;
    j["time_unit"] = time_unit;
    j["grid"] = {{"t0", g.t0}, {"dt", g.dt}, {"n", g.n}};
    j["config"] = detail::to_json(cfg);
    j["flags"] = {{"empty", d.empty},       {"degenerate", d.degenerate}, {"ridges_x", d.ridges_x},
                  {"ridges_y", d.ridges_y}, {"pairs", d.pairs},           {"warnings", d.warnings}};
    j["rz"] = d.ellipse.rz;
    if (d.empty) {
        j["global"] = nullptr;
    } else {
        const auto& gm = d.moments.global;
        j["global"] = {{"mean_frequency", {{"cycles", to_cycles(gm.mean_frequency)}, {"rad", gm.mean_frequency}}},
                       {"second_central",
                        {{"cycles", gm.second_central / (two_pi * two_pi)}, {"rad", gm.second_central}}},
                       {"energy", gm.energy},
                       {"identity_residual", d.moments.identity_residual}};
    }
    j["snapshots"] = snaps;
    json s;
    s["t"] = t;
    s["kappa"] = d.ellipse.kappa.values;
    s["lambda"] = d.ellipse.lambda.values;
    s["theta"] = d.ellipse.theta_normalized();
    s["phi"] = d.ellipse.phi_normalized();
    s["omega"] = detail::per_unit(d.moments.frequency);
    s["omega_phi"] = detail::per_unit(d.omega_phi);
    s["omega_theta"] = detail::per_unit(d.omega_theta);
    s["upsilon"] = detail::per_unit(d.moments.bandwidth);
    s["sigma2"] = {{"cycles", s2cyc}, {"rad", d.moments.second_central.values}};
    s["upsilon_kappa"] = detail::per_unit(d.bandwidth.amplitude_bw);
    s["upsilon_lambda"] = detail::per_unit(d.bandwidth.deformation_bw);
    s["upsilon_theta"] = detail::per_unit(d.bandwidth.precession_bw);
    s["mask"] = mask;
    j["series"] = std::move(s);
    return j;
}

inline std::string series_csv(const BivariateRecord& input, const Decomposition& d)
{
    std::ostringstream o;
    o << "t,x,y,signal_x,signal_y,residual_x,residual_y,kappa,lambda,theta,phi,omega_z,omega_phi,omega_theta,"
         "upsilon,upsilon_kappa,upsilon_lambda,upsilon_theta,mask\n";
    const auto th = d.ellipse.theta_normalized(), ph = d.ellipse.phi_normalized();
    using detail::fmt;
    for (std::size_t k = 0; k < input.size(); ++k) {
        o << fmt(input.t[k]) << ',' << fmt(input.x[k]) << ',' << fmt(input.y[k]) << ',' << fmt(d.signal.x[k]) << ','
          << fmt(d.signal.y[k]) << ',' << fmt(d.residual.x[k]) << ',' << fmt(d.residual.y[k]) << ','
          << fmt(d.ellipse.kappa[k]) << ',' << fmt(d.ellipse.lambda[k]) << ',' << fmt(th[k]) << ',' << fmt(ph[k])
          << ',' << fmt(to_cycles(d.moments.frequency[k])) << ',' << fmt(to_cycles(d.omega_phi[k])) << ','
          << fmt(to_cycles(d.omega_theta[k])) << ',' << fmt(d.moments.bandwidth[k]) << ','
          << fmt(d.bandwidth.amplitude_bw[k]) << ',' << fmt(d.bandwidth.deformation_bw[k]) << ','
          << fmt(d.bandwidth.precession_bw[k]) << ',' << (d.mask[k] ? 1 : 0) << '\n';
    }
    return o.str();
}

/// Frozen ellipses at the snapshot times, centred on the residual position.
inline std::vector<EllipseSnapshot> snapshots(const Decomposition& d, std::size_t n_points = 64)
{
    std::vector<EllipseSnapshot> out;
    for (auto k : snapshot_indices(d)) {
        auto s = snapshot(d.ellipse, k, n_points, {d.residual.x[k], d.residual.y[k]});
        s.period = two_pi / std::abs(d.moments.frequency[k]);
        out.push_back(std::move(s));
    }
    return out;
}

inline std::string snapshots_csv(const Decomposition& d)
{
    std::ostringstream o;
    o << "snapshot,index,t,period,center_x,center_y,point,x,y\n";
    const auto idx = snapshot_indices(d);
    const auto snaps = snapshots(d);
    using detail::fmt;
    for (std::size_t i = 0; i < snaps.size(); ++i)
        for (std::size_t j = 0; j < snaps[i].polyline.size(); ++j)
            o << i << ',' << idx[i] << ',' << fmt(snaps[i].timestamp) << ',' << fmt(snaps[i].period) << ','
              << fmt(snaps[i].center.x) << ',' << fmt(snaps[i].center.y) << ',' << j << ','
              << fmt(snaps[i].polyline[j].x) << ',' << fmt(snaps[i].polyline[j].y) << '\n';
    return o.str();
}

/// Three panels: the observed track, the signal as snapshots following the
/// residual track, and the residual.
inline std::string trajectory_svg(const BivariateRecord& input, const Decomposition& d)
{
    const double w = 300.0, h = 300.0, gap = 50.0, top = 40.0;
    svg::Panel a(gap, top, w, h), b(2 * gap + w, top, w, h), c(3 * gap + 2 * w, top, w, h);
    for (auto* p : {&a, &b, &c}) p->equal_aspect(true);
    a.title("(a) observed");
    b.title("(b) signal snapshots");
    c.title("(c) residual");
    a.line(input.x.values, input.y.values, {"black", 0.6, ""});
    a.marker(input.x[0], input.y[0], "triangle");
    b.line(d.residual.x.values, d.residual.y.values, {"#bbb", 0.5, ""});
    const auto snaps = snapshots(d);
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        std::vector<double> xs, ys;
        for (const auto& p : snaps[i].polyline) {
            xs.push_back(p.x);
            ys.push_back(p.y);
        }
        b.line(xs, ys, {i % 2 ? "#888" : "black", 0.8, ""});
    }
    b.marker(d.residual.x[0], d.residual.y[0], "triangle");
    c.line(d.residual.x.values, d.residual.y.values, {"black", 0.6, ""});
    c.marker(d.residual.x[0], d.residual.y[0], "triangle");
    return svg::document(4 * gap + 3 * w, top + h + 40, {a, b, c});
}

/// Five stacked panels: (a) signal and kappa, (b) |lambda|, (c) omega_z,
/// omega_phi, omega_theta, (d) bandwidth terms, (e) bandwidth terms over |omega_z|.
inline std::string moments_svg(const Decomposition& d, const std::string& time_unit)
{
    const auto p = panel_series(d);
    Mask keep(p.t.size());
    for (std::size_t k = 0; k < keep.size(); ++k) keep[k] = !p.mask[k];
    const double w = 720.0, h = 120.0, left = 70.0, top = 40.0, gap = 45.0;
    std::vector<svg::Panel> panels;
    for (int i = 0; i < 5; ++i) panels.emplace_back(left, top + i * (h + gap), w, h);
    panels[0].title("(a) signal x (thin), y (dashed), kappa (heavy)");
    panels[0].line(p.t, p.x, {"black", 0.5, ""});
    panels[0].line(p.t, p.y, {"black", 0.5, "4,3"});
    panels[0].line(p.t, p.kappa, {"black", 2.0, ""}, keep);
    panels[1].title("(b) linearity |lambda|");
    panels[1].line(p.t, p.linearity, {"black", 1.0, ""}, keep);
    panels[2].title("(c) omega_z (heavy), omega_phi (thin), omega_theta (dashed) [cycles/" + time_unit + "]");
    panels[2].line(p.t, p.omega_z, {"black", 2.0, ""}, keep);
    panels[2].line(p.t, p.omega_phi, {"black", 0.8, ""}, keep);
    panels[2].line(p.t, p.omega_theta, {"black", 0.8, "4,3"}, keep);
    panels[3].title("(d) |upsilon_kappa| (heavy), |upsilon_lambda| (thin), |upsilon_theta| (dashed) [1/" + time_unit +
                    "]");
    panels[3].line(p.t, p.bw_kappa, {"black", 2.0, ""}, keep);
    panels[3].line(p.t, p.bw_lambda, {"black", 0.8, ""}, keep);
    panels[3].line(p.t, p.bw_theta, {"black", 0.8, "4,3"}, keep);
    panels[4].title("(e) bandwidth terms / |omega_z|");
    panels[4].line(p.t, p.nd_kappa, {"black", 2.0, ""}, keep);
    panels[4].line(p.t, p.nd_lambda, {"black", 0.8, ""}, keep);
    panels[4].line(p.t, p.nd_theta, {"black", 0.8, "4,3"}, keep);
    panels[4].xlabel("time [" + time_unit + "]");
    return svg::document(left + w + 30, top + 5 * (h + gap) + 10, panels);
}

/// Trajectories of the three single-term presets side by side. The first
/// orbit is drawn heavy; a circle marks the start and an x the end.
inline std::string stability_svg(const std::vector<EllipseSeries>& cases, const std::vector<std::string>& titles)
{
    const double w = 260.0, h = 260.0, gap = 40.0, top = 40.0;
    std::vector<svg::Panel> panels;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        svg::Panel p(gap + static_cast<double>(i) * (w + gap), top, w, h);
        p.equal_aspect(true);
        if (i < titles.size()) p.title(titles[i]);
        const auto syn = synthesize(cases[i]);
        const std::size_t n = syn.x.size();
        std::size_t orbit = n;
        for (std::size_t k = 0; k < n; ++k)
            if (std::abs(cases[i].phi[k] - cases[i].phi[0]) >= two_pi) {
                orbit = k + 1;
                break;
            }
        p.line(syn.x.values, syn.y.values, {"black", 0.7, ""});
        p.line({syn.x.values.begin(), syn.x.values.begin() + static_cast<std::ptrdiff_t>(orbit)},
               {syn.y.values.begin(), syn.y.values.begin() + static_cast<std::ptrdiff_t>(orbit)}, {"black", 2.2, ""});
        p.marker(syn.x[0], syn.y[0], "circle");
        p.marker(syn.x[n - 1], syn.y[n - 1], "x");
        panels.push_back(std::move(p));
    }
    return svg::document(gap + static_cast<double>(cases.size()) * (w + gap), top + h + 40, panels);
}

struct ReportOptions {
    std::string time_unit = "days";
    DecomposeConfig config;
};

/// Writes every report file into `dir` (created if needed) and returns the paths.
inline std::vector<std::filesystem::path> write_report(const BivariateRecord& input, const Decomposition& d,
                                                       const std::filesystem::path& dir, const ReportOptions& opt = {})
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        throw std::runtime_error("cannot create output directory '" + dir.string() + "'");
    std::vector<std::filesystem::path> out{dir / "moments.json", dir / "series.csv", dir / "snapshots.csv",
                                           dir / "trajectory.svg", dir / "moments.svg"};
    detail::write_text(out[0], moments_json(d, opt.config, opt.time_unit).dump(1) + "\n");
    detail::write_text(out[1], series_csv(input, d));
    detail::write_text(out[2], snapshots_csv(d));
    detail::write_text(out[3], trajectory_svg(input, d));
    detail::write_text(out[4], moments_svg(d, opt.time_unit));
    return out;
}

} // namespace bivar::pipeline

#endif // BIVAR_PIPELINE_REPORT_HPP
