// SPDX-License-Identifier: Apache-2.0
//
// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. argv[1] is a directory for emitted figures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bivar/bivar.hpp"
#include "oracles.hpp"

using namespace bivar;
using namespace bivar::pipeline;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail)
{
    std::printf("[%s] %2d %-38s %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

/// max |a - b| / max |b| over unmasked samples of b.
double rel_max(const RealSeries& a, const RealSeries& b)
{
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k) {
        if (b.masked(k) || a.masked(k)) continue;
        num = std::max(num, std::abs(a[k] - b[k]));
        den = std::max(den, std::abs(b[k]));
    }
    return den > 0.0 ? num / den : num;
}

RealSeries gaussian_tone(std::size_t n)
{
    const double s = static_cast<double>(n) / 16.0, c = static_cast<double>(n) / 2.0, w = two_pi / 32.0;
    std::vector<double> x(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) - c;
        x[k] = std::exp(-t * t / (2.0 * s * s)) * std::cos(w * static_cast<double>(k));
    }
    return RealSeries(SampleGrid{0.0, 1.0, n}, std::move(x));
}

void analytic_operator()
{
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (unsigned seed = 1; seed <= 20; ++seed) {
        const auto x = oracle::gaussian_noise(256, seed);
        const auto fast = analytic_signal(RealSeries(SampleGrid{0.0, 1.0, 256}, x));
        const auto slow = oracle::analytic(x);
        for (std::size_t k = 0; k < 256; ++k) worst = std::max(worst, std::abs(fast[k] - slow[k]));
    }
    const double el = seconds_since(t0);
    report(1, "analytic operator vs direct DFT", worst < 1e-9 && el < 1.0,
           fmt("max diff %.2e (< 1e-9), %.3f s (< 1 s)", worst, el));
}

void moment_decomposition()
{
    const auto t0 = Clock::now();
    const auto xp = analytic_signal(gaussian_tone(4096));
    const auto g = global_moments(xp);
    const auto w = inst_frequency(xp);
    const double wbar = power_weighted_average(xp, w);
    const double s2bar = power_weighted_average(xp, inst_second_central(xp, g.mean_frequency));
    const double e1 = std::abs(wbar / g.mean_frequency - 1.0), e2 = std::abs(s2bar / g.second_central - 1.0);
    const double el = seconds_since(t0);
    report(2, "time averages equal global moments", e1 < 1e-3 && e2 < 1e-3 && el < 1.0,
           fmt("mean freq %.2e, second moment %.2e (< 1e-3), %.3f s", e1, e2, el));
}

void pointwise_identity()
{
    const auto xp = analytic_signal(gaussian_tone(4096));
    const auto g = global_moments(xp);
    const auto w = inst_frequency(xp), u = inst_bandwidth(xp);
    const auto s2 = inst_second_central(xp, g.mean_frequency);
    double worst = 0.0;
    std::size_t used = 0;
    for (std::size_t k = 0; k < s2.size(); ++k) {
        if (s2.masked(k) || w.masked(k) || u.masked(k)) continue;
        const double r = s2[k] - (w[k] - g.mean_frequency) * (w[k] - g.mean_frequency) - u[k] * u[k];
        worst = std::max(worst, std::abs(r) / s2[k]);
        ++used;
    }
    report(3, "pointwise moment identity", worst < 1e-8 && used > 0,
           fmt("max relative residual %.2e (< 1e-8) over %.0f samples", worst, static_cast<double>(used)));
}

/// A random analytic component: a few positive-frequency tones with random
/// amplitudes, phases and slow Gaussian envelopes.
AnalyticSeries random_component(std::mt19937_64& rng, std::size_t n)
{
    std::uniform_real_distribution<double> amp(0.2, 1.5), ph(-pi, pi), fr(0.05, 0.6), ctr(0.0, 1.0);
    std::vector<complex> v(n, complex(0.0));
    for (int m = 0; m < 3; ++m) {
        const double a = amp(rng), p = ph(rng), f = fr(rng), c = ctr(rng) * static_cast<double>(n);
        const double s = 0.3 * static_cast<double>(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double t = static_cast<double>(k);
            v[k] += a * std::exp(-(t - c) * (t - c) / (2.0 * s * s)) * std::polar(1.0, f * t + p);
        }
    }
    return AnalyticSeries(SampleGrid{0.0, 1.0, n}, std::move(v));
}

void unitary_invariance()
{
    std::mt19937_64 rng(2024);
    double inv = 0.0, rot = 0.0, unit = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 256;
        const CartesianPair c{random_component(rng, n), random_component(rng, n)};
        const auto v = as_vector(c);
        const auto o = oracle::random_unitary(rng);
        ComplexMatrix U(2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) U(i, j) = o.u[i][j];
        unit = std::max(unit, U.unitarity_error());
        const auto a = joint_moments(v), b = joint_moments(unitary_transform(v, U, o.c));
        inv = std::max({inv, rel_max(b.frequency, a.frequency), rel_max(b.bandwidth, a.bandwidth),
                        rel_max(b.second_central, a.second_central)});
        const auto r = joint_moments(as_vector(cartesian_to_rotary(c)));
        rot = std::max({rot, rel_max(r.frequency, a.frequency), rel_max(r.bandwidth, a.bandwidth),
                        rel_max(r.second_central, a.second_central)});
    }
    report(4, "unitary invariance, rotary = Cartesian", inv < 1e-10 && rot < 1e-10,
           fmt("invariance %.2e, rotary %.2e (< 1e-10); unitarity %.1e", inv, rot, unit));
}

/// A smooth ellipse with `per` samples per orbit; modulations span 15 orbits.
EllipseSeries cross_path_ellipse(double per)
{
    const double orbits = 45.0, dt = 1.0 / per;
    const auto n = static_cast<std::size_t>(orbits * per);
    const double w = two_pi, Tm = 15.0;
    std::vector<double> k(n), l(n), th(n), ph(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = dt * static_cast<double>(i);
        k[i] = 1.0 + 0.4 * std::sin(two_pi * t / Tm);
        l[i] = 0.45 + 0.3 * std::sin(two_pi * t / Tm + 1.0);
        th[i] = 0.3 + 0.6 * std::sin(two_pi * t / (1.3 * Tm));
        ph[i] = w * t + 1.5 * std::cos(two_pi * t / Tm);
    }
    return make_ellipse(SampleGrid{0.0, dt, n}, k, l, th, ph, 1);
}

std::pair<double, double> cross_path_error(double per)
{
    const auto e = cross_path_ellipse(per);
    const auto v = as_vector(rotary_to_cartesian(ellipse_to_rotary(e)));
    const auto jm = joint_moments(v);
    const auto wf = bivariate_frequency_from_ellipse(e);
    const auto bw = bandwidth_decomposition(e).total();
    const auto [lo, hi] = central_range(e.size());
    const Mask m = merge_masks(merge_masks(wf.mask, bw.mask), jm.frequency.mask);
    return {relative_rms(wf.values, jm.frequency.values, lo, hi, m),
            relative_rms(bw.values, jm.bandwidth.values, lo, hi, m)};
}

void ellipse_cross_path()
{
    const auto [f1, b1] = cross_path_error(100.0);
    const auto [f2, b2] = cross_path_error(200.0);
    const bool ok = f1 < 1e-2 && b1 < 1e-2 && f1 / f2 >= 2.0 && b1 / b2 >= 2.0;
    report(5, "ellipse forms vs joint moments", ok,
           fmt("freq %.2e -> %.2e, bw %.2e", f1, f2, b1) + fmt(" -> %.2e (< 1e-2, ratios %.1f, ", b2, f1 / f2) +
               fmt("%.1f >= 2)", b1 / b2));
}

void stability_presets(const std::filesystem::path& out)
{
    const std::vector<Preset> presets{Preset::fig3_amplitude, Preset::fig3_deformation, Preset::fig3_precession};
    double worst_on = 0.0, worst_off = 0.0;
    std::vector<EllipseSeries> cases;
    for (std::size_t i = 0; i < presets.size(); ++i) {
        const auto s = preset_scenario(presets[i]);
        const auto syn = synthesize_scenario(s);
        const auto& d = syn.truth;
        const auto [lo, hi] = central_range(s.samples);
        for (std::size_t k = lo; k < hi; ++k) {
            const double wz = std::abs(d.moments.frequency[k]);
            const double r[3] = {std::abs(d.bandwidth.amplitude_bw[k]) / wz,
                                 std::abs(d.bandwidth.deformation_bw[k]) / wz,
                                 std::abs(d.bandwidth.precession_bw[k]) / wz};
            for (std::size_t j = 0; j < 3; ++j) {
                if (j == i) worst_on = std::max(worst_on, std::abs(r[j] / stability_ratio - 1.0));
                else worst_off = std::max(worst_off, r[j]);
            }
        }
        cases.push_back(d.ellipse);
    }
    std::filesystem::create_directories(out);
    const auto path = out / "stability.svg";
    std::ofstream(path) << stability_svg(cases, {"amplitude", "deformation", "precession"});
    const bool svg = std::filesystem::exists(path) && std::filesystem::file_size(path) > 0;
    report(6, "single-term stability presets", worst_on < 0.01 && worst_off < 1e-3 * stability_ratio && svg,
           fmt("target term %.2e (< 1e-2), others %.1e (< 2.5e-5), svg ", worst_on, worst_off) +
               (svg ? "written" : "missing"));
}

void morse_peak()
{
    double worst = 0.0;
    bool zeros = true;
    for (auto [b, g] : {std::pair{3.0, 3.0}, {2.0, 3.0}, {8.0, 3.0}}) {
        const MorseParams p{b, g};
        const double found = oracle::argmax([&](double w) { return std::abs(morse_wavelet(p, w)); }, 1e-6, 10.0);
        worst = std::max(worst, std::abs(found - std::pow(b / g, 1.0 / g)));
        for (double w : {0.0, -0.0, -1e-300, -1e-9, -0.5, -3.0, -1e6})
            if (morse_wavelet(p, w) != 0.0) zeros = false;
    }
    report(7, "Morse wavelet peak and support", worst < 1e-4 && zeros,
           fmt("peak error %.2e (< 1e-4), ", worst) + (zeros ? "zero for w <= 0" : "nonzero for w <= 0"));
}

void ridge_recovery()
{
    auto s = preset_scenario(Preset::paper_like);
    s.snr_db = std::numeric_limits<double>::infinity();
    s.drift_speed = 0.0;
    const auto syn = synthesize_scenario(s);
    const auto t0 = Clock::now();
    const auto d = decompose(syn.record);
    const double el = seconds_since(t0);
    const auto [lo, hi] = central_range(s.samples);
    const double ek = max_relative_error(d.ellipse.kappa.values, syn.truth.ellipse.kappa.values, lo, hi);
    const double ew = max_relative_error(d.moments.frequency.values, syn.truth.moments.frequency.values, lo, hi);
    report(8, "ridge recovery of a modulated ellipse", ek < 0.05 && ew < 0.05 && el < 5.0,
           fmt("kappa %.2e, omega_z %.2e (< 5e-2), %.3f s", ek, ew, el));
}

void end_to_end(const std::filesystem::path& out)
{
    const auto t0 = Clock::now();
    const auto syn = synthesize_scenario(preset_scenario(Preset::paper_like));
    const auto d = decompose(syn.record);
    write_report(syn.record, d, out / "end_to_end");
    const double el = seconds_since(t0);
    const auto [lo, hi] = central_range(syn.record.size());
    const double cx = correlation(d.signal.x.values, syn.truth.signal.x.values, lo, hi);
    const double cy = correlation(d.signal.y.values, syn.truth.signal.y.values, lo, hi);
    bool exact = true;
    for (std::size_t k = 0; k < syn.record.size(); ++k)
        if (d.signal.x[k] + d.residual.x[k] != syn.record.x[k] || d.signal.y[k] + d.residual.y[k] != syn.record.y[k])
            exact = false;
    report(9, "end-to-end eddy separation", cx >= 0.95 && cy >= 0.95 && exact && el < 10.0,
           fmt("corr x %.4f, y %.4f (>= 0.95), %.3f s, ", cx, cy, el) +
               (exact ? "signal + residual exact" : "signal + residual inexact"));
}

void round_trip()
{
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> kap(0.1, 10.0), lam(0.02, 0.98), ang(-10.0, 10.0);
    double worst = 0.0, closure = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 64;
        const int rz = trial % 2 ? 1 : -1;
        std::vector<double> k(n), l(n), th(n), ph(n);
        for (std::size_t i = 0; i < n; ++i) {
            k[i] = kap(rng);
            l[i] = rz * lam(rng);
            th[i] = ang(rng);
            ph[i] = ang(rng);
        }
        const auto c = synthesize(make_ellipse(SampleGrid{0.0, 1.0, n}, k, l, th, ph, rz)).analytic;
        const auto e = rotary_to_ellipse(cartesian_to_rotary(c));
        const auto back = rotary_to_cartesian(ellipse_to_rotary(e));
        double scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) scale = std::max({scale, std::abs(c.xp[i]), std::abs(c.yp[i])});
        for (std::size_t i = 0; i < n; ++i) {
            worst = std::max({worst, std::abs(back.xp[i] - c.xp[i]) / scale, std::abs(back.yp[i] - c.yp[i]) / scale});
            const auto [ap, an] = rotary_amplitudes(e.kappa[i], e.lambda[i], e.rz);
            closure = std::max(closure, std::abs(ap * ap + an * an - e.kappa[i] * e.kappa[i]) /
                                            (e.kappa[i] * e.kappa[i]));
        }
    }
    report(10, "Cartesian-rotary-ellipse round trip", worst < 1e-10 && closure < 1e-12,
           fmt("round trip %.2e (< 1e-10), closure %.2e (< 1e-12)", worst, closure));
}

} // namespace

int main(int argc, char** argv)
{
    const std::filesystem::path out = argc > 1 ? argv[1] : "acceptance_out";
    const std::vector<std::function<void()>> checks{
        analytic_operator, moment_decomposition, pointwise_identity, unitary_invariance, ellipse_cross_path,
        [&] { stability_presets(out); }, morse_peak, ridge_recovery, [&] { end_to_end(out); }, round_trip};
    for (std::size_t i = 0; i < checks.size(); ++i) {
        try {
            checks[i]();
        } catch (const std::exception& e) {
            report(static_cast<int>(i + 1), "exception", false, e.what());
        }
    }
    std::printf("%d of %zu criteria failed\n", failures, checks.size());
    return failures == 0 ? 0 : 1;
}
