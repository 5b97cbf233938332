// SPDX-License-Identifier: Apache-2.0
//
// Synthetic eddy-plus-drift records with stored truth.

#ifndef BIVAR_PIPELINE_SCENARIO_HPP
#define BIVAR_PIPELINE_SCENARIO_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "bivar/ellipse.hpp"
#include "bivar/pipeline/decompose.hpp"
#include "bivar/pipeline/record.hpp"

namespace bivar::pipeline {

enum class Preset { paper_like, circle, linear, fig3_amplitude, fig3_deformation, fig3_precession };

inline Preset parse_preset(const std::string& s)
{
    if (s == "paper-like") return Preset::paper_like;
    if (s == "circle") return Preset::circle;
    if (s == "linear") return Preset::linear;
    if (s == "fig3-amplitude") return Preset::fig3_amplitude;
    if (s == "fig3-deformation") return Preset::fig3_deformation;
    if (s == "fig3-precession") return Preset::fig3_precession;
    throw std::invalid_argument("unknown preset '" + s + "'");
}

inline const char* to_string(Preset p)
{
    switch (p) {
    case Preset::circle: return "circle";
    case Preset::linear: return "linear";
    case Preset::fig3_amplitude: return "fig3-amplitude";
    case Preset::fig3_deformation: return "fig3-deformation";
    case Preset::fig3_precession: return "fig3-precession";
    default: return "paper-like";
    }
}

/// Ratio of each stability preset's single nonzero bandwidth term to omega_z.
inline constexpr double stability_ratio = 0.025;

struct SynthScenario {
    Preset preset = Preset::paper_like;
    std::size_t samples = 1500;
    double period = 20.0;      ///< mean orbital period, time units
    double dt = 1.0;
    double amplitude = 1.0;    ///< base kappa; 0 disables the eddy
    double snr_db = 20.0;      ///< eddy RMS over noise std; infinity disables noise
    double drift_speed = 0.1;  ///< peak drift speed over mean orbital speed
    std::uint64_t seed = 1;
    std::string time_unit = "days";

    void validate() const
    {
        if (samples < 16) throw std::invalid_argument("scenario: at least 16 samples required");
        if (!(dt > 0.0)) throw std::invalid_argument("scenario: dt must be positive");
        if (!(period > 2.0 * dt)) throw std::invalid_argument("scenario: period must exceed two samples");
        if (!(amplitude >= 0.0)) throw std::invalid_argument("scenario: amplitude must be nonnegative");
        if (!(drift_speed >= 0.0)) throw std::invalid_argument("scenario: drift speed must be nonnegative");
    }
};

/// Defaults for a preset. Only paper-like carries drift and noise.
inline SynthScenario preset_scenario(Preset p)
{
    SynthScenario s;
    s.preset = p;
    if (p != Preset::paper_like) {
        s.snr_db = std::numeric_limits<double>::infinity();
        s.drift_speed = 0.0;
    }
    switch (p) {
    case Preset::fig3_amplitude:
    case Preset::fig3_precession:
        s.period = 50.0;
        s.samples = 400;
        break;
    case Preset::fig3_deformation:
        // lambda = sin(0.05 omega t) reaches 1 after five orbits.
        s.period = 50.0;
        s.samples = 240;
        break;
    default: break;
    }
    return s;
}

/// The eddy's ellipse parameters for a scenario.
inline EllipseSeries scenario_ellipse(const SynthScenario& s)
{
    s.validate();
    const SampleGrid g{0.0, s.dt, s.samples};
    const std::size_t n = s.samples;
    const double w = two_pi / s.period, T = g.duration(), A = s.amplitude;
    std::vector<double> kappa(n, A), lambda(n, 0.0), theta(n, 0.0), phi(n);
    int rz = 1;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = g.time(k);
        phi[k] = w * t;
        switch (s.preset) {
        case Preset::paper_like: {
            // Clockwise, nearly circular, slowly precessing; kappa swells by 3x
            // mid-record and the orbital frequency wanders by 10%.
            const double u = t / T;
            rz = -1;
            kappa[k] = A * (2.0 - std::cos(two_pi * u));
            lambda[k] = -(0.15 + 0.1 * std::sin(two_pi * u));
            theta[k] = 0.4 + 1.5 * u;
            phi[k] = w * t - 0.1 * w * T / two_pi * std::cos(two_pi * u);
            break;
        }
        case Preset::linear:
            lambda[k] = 1.0;
            theta[k] = 0.3;
            break;
        case Preset::fig3_amplitude:
            kappa[k] = A * std::exp(stability_ratio * w * t);
            lambda[k] = 0.5;
            break;
        case Preset::fig3_deformation:
            lambda[k] = std::sin(std::min(2.0 * stability_ratio * w * t, pi / 2.0));
            break;
        case Preset::fig3_precession: {
            const double l = 0.5, r = std::sqrt(1.0 - l * l);
            lambda[k] = l;
            theta[k] = stability_ratio * w / (l - stability_ratio * r) * t;
            break;
        }
        default: break;
        }
    }
    return make_ellipse(g, std::move(kappa), std::move(lambda), std::move(theta), std::move(phi), rz);
}

struct SynthResult {
    BivariateRecord record;
    Decomposition truth;  ///< signal = eddy, residual = drift + noise
    RealSeries drift_x, drift_y;
};

/// record = eddy + drift + Gaussian noise, reproducible from the seed.
inline SynthResult synthesize_scenario(const SynthScenario& s)
{
    const auto e = scenario_ellipse(s);
    const auto& g = e.grid();
    const std::size_t n = g.n;
    const auto syn = synthesize(e);

    double kbar = 0.0, power = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        kbar += e.kappa[k];
        power += syn.x[k] * syn.x[k] + syn.y[k] * syn.y[k];
    }
    kbar /= static_cast<double>(n);
    const double rms = std::sqrt(power / (2.0 * static_cast<double>(n)));

    // Drift: steady eastward translation plus a meander far below the eddy band.
    const double speed = s.drift_speed * kbar * two_pi / s.period;
    const double meander = 0.6 * g.duration();
    std::vector<double> dx(n), dy(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = g.time(k);
        dx[k] = speed * t;
        dy[k] = speed * meander / two_pi * std::sin(two_pi * t / meander);
    }

    std::vector<double> nx(n, 0.0), ny(n, 0.0);
    if (std::isfinite(s.snr_db) && rms > 0.0) {
        const double sigma = rms * std::pow(10.0, -s.snr_db / 20.0);
        std::mt19937_64 rng(s.seed);
        std::normal_distribution<double> normal(0.0, sigma);
        for (std::size_t k = 0; k < n; ++k) {
            nx[k] = normal(rng);
            ny[k] = normal(rng);
        }
    }

    std::vector<double> x(n), y(n), rx(n), ry(n);
    for (std::size_t k = 0; k < n; ++k) {
        rx[k] = dx[k] + nx[k];
        ry[k] = dy[k] + ny[k];
        x[k] = syn.x[k] + rx[k];
        y[k] = syn.y[k] + ry[k];
    }
    const std::map<std::string, std::string> meta{{"time_unit", s.time_unit},
                                                  {"source", std::string("synthetic ") + to_string(s.preset)},
                                                  {"seed", std::to_string(s.seed)}};
    SynthResult out;
    out.record = make_record(RealSeries(g, std::move(x)), RealSeries(g, std::move(y)), meta);
    out.drift_x = RealSeries(g, std::move(dx));
    out.drift_y = RealSeries(g, std::move(dy));

    Decomposition& d = out.truth;
    d.signal = make_record(RealSeries(g, syn.x.values), RealSeries(g, syn.y.values), meta);
    d.residual = make_record(RealSeries(g, std::move(rx)), RealSeries(g, std::move(ry)), meta);
    d.analytic = syn.analytic;
    d.ellipse = e;
    d.empty = s.amplitude == 0.0;
    if (d.empty) d.ellipse = null_ellipse(g);
    analyze(d);
    return out;
}

} // namespace bivar::pipeline

#endif // BIVAR_PIPELINE_SCENARIO_HPP
