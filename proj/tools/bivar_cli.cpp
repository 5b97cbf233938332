// SPDX-License-Identifier: Apache-2.0
//
// bivar: command-line front end. Every subcommand reads a t,x,y record
// (except synth) and writes CSV/JSON/SVG files into --output.
// Frequencies are written in cycles per time unit.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bivar/bivar.hpp"

namespace fs = std::filesystem;
using namespace bivar;
using namespace bivar::pipeline;
using pipeline::detail::format_number;

namespace {

struct Common {
    std::string input;
    std::string output = ".";
    double dt = 0.0;  ///< 0 keeps the record's own spacing
    std::string time_unit;
    std::string pad = "none";
};

struct DecomposeFlags {
    double beta = 3.0, gamma = 3.0;
    std::size_t bands = 50;
    double period_min = 2.6, period_max = 53.0, min_ridge_periods = 2.0;
    std::string pad = "mirror";
    double noise_std = 0.0, snr_floor = 2.0;
    bool trim_coi = false;

    DecomposeConfig config() const
    {
        DecomposeConfig c;
        c.morse = {beta, gamma};
        c.bands = bands;
        c.period_min = period_min;
        c.period_max = period_max;
        c.min_ridge_periods = min_ridge_periods;
        c.pad = parse_padding(pad);
        c.noise_std = noise_std;
        c.snr_floor = snr_floor;
        c.trim_coi = trim_coi;
        return c;
    }
};

void add_common(CLI::App* app, Common& c, bool with_pad)
{
    app->add_option("-i,--input", c.input, "input CSV with columns t,x,y")->required()->check(CLI::ExistingFile);
    app->add_option("-o,--output", c.output, "output directory")->capture_default_str();
    app->add_option("--dt", c.dt, "override the sampling interval (time units)")->check(CLI::PositiveNumber);
    app->add_option("--time-unit", c.time_unit, "time unit name (default: record metadata, else days)");
    if (with_pad)
        app->add_option("--pad", c.pad, "edge treatment")
            ->check(CLI::IsMember({"none", "zero", "mirror"}))
            ->capture_default_str();
}

void add_decompose(CLI::App* app, DecomposeFlags& f)
{
    app->add_option("--beta", f.beta, "Morse beta")->capture_default_str();
    app->add_option("--gamma", f.gamma, "Morse gamma")->capture_default_str();
    app->add_option("--bands", f.bands, "number of scale bands")->capture_default_str();
    app->add_option("--period-min", f.period_min, "shortest period (time units)")->capture_default_str();
    app->add_option("--period-max", f.period_max, "longest period (time units)")->capture_default_str();
    app->add_option("--min-ridge-periods", f.min_ridge_periods, "shortest kept ridge in periods")
        ->capture_default_str();
    app->add_option("--pad", f.pad, "edge treatment")
        ->check(CLI::IsMember({"none", "zero", "mirror"}))
        ->capture_default_str();
    app->add_option("--noise-std", f.noise_std, "white-noise level for the ridge noise floor (0 = off)")
        ->capture_default_str();
    app->add_option("--snr-floor", f.snr_floor, "ridge points must exceed this multiple of the noise level")
        ->capture_default_str();
    app->add_flag("--trim-coi", f.trim_coi, "trim ridges to the cone of influence");
}

BivariateRecord load(const Common& c)
{
    auto r = load_record(c.input);
    if (c.dt > 0.0) {
        const SampleGrid g{r.grid().t0, c.dt, r.size()};
        for (std::size_t k = 0; k < r.size(); ++k) r.t[k] = g.time(k);
        r.x = RealSeries(g, std::move(r.x.values));
        r.y = RealSeries(g, std::move(r.y.values));
    }
    return r;
}

std::string unit_of(const Common& c, const BivariateRecord& r)
{
    if (!c.time_unit.empty()) return c.time_unit;
    const auto it = r.metadata.find("time_unit");
    return it != r.metadata.end() ? it->second : "days";
}

fs::path out_dir(const Common& c)
{
    const fs::path p(c.output);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (!fs::is_directory(p)) throw std::runtime_error("cannot create output directory '" + c.output + "'");
    return p;
}

void write_file(const fs::path& p, const std::string& text)
{
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + p.string() + "'");
    f << text;
    if (!f) throw std::runtime_error("error writing '" + p.string() + "'");
    std::cout << p.string() << '\n';
}

std::string num(double v) { return format_number(v); }

double cyc_or_nan(const RealSeries& s, std::size_t k)
{
    return s.masked(k) ? std::numeric_limits<double>::quiet_NaN() : to_cycles(s[k]);
}

int run_analytic(const Common& c)
{
    const auto r = load(c);
    const auto pad = parse_padding(c.pad);
    const auto xp = analytic_signal(r.x, pad), yp = analytic_signal(r.y, pad);
    std::ostringstream o;
    o << "t,x_re,x_im,y_re,y_im\n";
    for (std::size_t k = 0; k < r.size(); ++k)
        o << num(r.t[k]) << ',' << num(xp[k].real()) << ',' << num(xp[k].imag()) << ',' << num(yp[k].real()) << ','
          << num(yp[k].imag()) << '\n';
    write_file(out_dir(c) / "analytic.csv", o.str());
    return 0;
}

int run_moments(const Common& c)
{
    const auto r = load(c);
    const auto pad = parse_padding(c.pad);
    const auto xp = analytic_signal(r.x, pad), yp = analytic_signal(r.y, pad);
    const auto gx = global_moments(xp), gy = global_moments(yp);
    const auto tx = moment_track(xp, gx), ty = moment_track(yp, gy);
    const auto jm = joint_moments(as_vector(CartesianPair{xp, yp}));
    std::ostringstream o;
    o << "t,omega_x,upsilon_x,omega_y,upsilon_y,omega,upsilon,sigma2,mask\n";
    for (std::size_t k = 0; k < r.size(); ++k) {
        const bool m = tx.frequency.masked(k) || ty.frequency.masked(k) || jm.frequency.masked(k);
        o << num(r.t[k]) << ',' << num(cyc_or_nan(tx.frequency, k)) << ',' << num(tx.bandwidth[k]) << ','
          << num(cyc_or_nan(ty.frequency, k)) << ',' << num(ty.bandwidth[k]) << ',' << num(cyc_or_nan(jm.frequency, k))
          << ',' << num(jm.bandwidth[k]) << ',' << num(jm.second_central[k] / (two_pi * two_pi)) << ','
          << (m ? 1 : 0) << '\n';
    }
    const auto dir = out_dir(c);
    write_file(dir / "moments.csv", o.str());
    const auto g = [](const GlobalMoments& m) {
        return nlohmann::json{{"mean_frequency_cycles", to_cycles(m.mean_frequency)},
                              {"second_central_cycles2", m.second_central / (two_pi * two_pi)},
                              {"energy", m.energy}};
    };
    const nlohmann::json j{{"time_unit", unit_of(c, r)},
                           {"x", g(gx)},
                           {"y", g(gy)},
                           {"joint", g(jm.global)},
                           {"identity_residual", jm.identity_residual}};
    write_file(dir / "global_moments.json", j.dump(1) + "\n");
    return 0;
}

int run_ellipse(const Common& c)
{
    const auto r = load(c);
    const auto pad = parse_padding(c.pad);
    const CartesianPair cp{analytic_signal(r.x, pad), analytic_signal(r.y, pad)};
    const auto e = rotary_to_ellipse(cartesian_to_rotary(cp));
    const auto wphi = orbital_frequency(e), wth = precession_rate(e);
    const auto bw = bandwidth_decomposition(e);
    const auto th = e.theta_normalized(), ph = e.phi_normalized();
    std::ostringstream o;
    o << "t,kappa,lambda,theta,phi,omega_phi,omega_theta,upsilon_kappa,upsilon_lambda,upsilon_theta,mask\n";
    for (std::size_t k = 0; k < r.size(); ++k)
        o << num(r.t[k]) << ',' << num(e.kappa[k]) << ',' << num(e.lambda[k]) << ',' << num(th[k]) << ','
          << num(ph[k]) << ',' << num(to_cycles(wphi[k])) << ',' << num(to_cycles(wth[k])) << ','
          << num(bw.amplitude_bw[k]) << ',' << num(bw.deformation_bw[k]) << ',' << num(bw.precession_bw[k]) << ','
          << (e.mask.empty() || !e.mask[k] ? 0 : 1) << '\n';
    write_file(out_dir(c) / "ellipse.csv", o.str());
    std::cout << "rz = " << e.rz << (e.rz_tie ? " (tie)" : "") << '\n';
    return 0;
}

int run_transform(const Common& c, const DecomposeFlags& f)
{
    const auto r = load(c);
    const auto cfg = f.config();
    const auto scales = cfg.scale_grid();
    const auto wx = cwt(r.x, scales, cfg.morse, cfg.pad), wy = cwt(r.y, scales, cfg.morse, cfg.pad);
    std::ostringstream o;
    o << "band,period,t,x_re,x_im,y_re,y_im\n";
    for (std::size_t j = 0; j < scales.size(); ++j)
        for (std::size_t k = 0; k < r.size(); ++k)
            o << j << ',' << num(scales.period(j)) << ',' << num(r.t[k]) << ',' << num(wx.at(j, k).real()) << ','
              << num(wx.at(j, k).imag()) << ',' << num(wy.at(j, k).real()) << ',' << num(wy.at(j, k).imag()) << '\n';
    write_file(out_dir(c) / "transform.csv", o.str());
    return 0;
}

std::string ridges_csv(const BivariateRecord& r, const std::vector<RidgeCurve>& rs)
{
    std::ostringstream o;
    o << "ridge,time,refined_scale,frequency,real,imag\n";
    for (std::size_t i = 0; i < rs.size(); ++i)
        for (std::size_t k = 0; k < rs[i].length(); ++k)
            o << i << ',' << num(r.t[rs[i].first + k]) << ',' << num(rs[i].scale_index[k]) << ','
              << num(to_cycles(rs[i].inst_frequency[k])) << ',' << num(rs[i].values[k].real()) << ','
              << num(rs[i].values[k].imag()) << '\n';
    return o.str();
}

int run_ridges(const Common& c, const DecomposeFlags& f)
{
    const auto r = load(c);
    const auto cfg = f.config();
    const auto scales = cfg.scale_grid();
    RidgeOptions opt;
    opt.min_periods = cfg.min_ridge_periods;
    opt.trim_coi = cfg.trim_coi;
    opt.noise_std = cfg.noise_std;
    opt.snr_floor = cfg.snr_floor;
    const auto rx = ridge_detect(cwt(r.x, scales, cfg.morse, cfg.pad), opt);
    const auto ry = ridge_detect(cwt(r.y, scales, cfg.morse, cfg.pad), opt);
    const auto dir = out_dir(c);
    write_file(dir / "ridges_x.csv", ridges_csv(r, rx));
    write_file(dir / "ridges_y.csv", ridges_csv(r, ry));
    std::cout << rx.size() << " x ridges, " << ry.size() << " y ridges\n";
    return 0;
}

void print_flags(const Decomposition& d)
{
    std::cout << "ridges x " << d.ridges_x << ", y " << d.ridges_y << ", pairs " << d.pairs
              << (d.empty ? ", empty" : "") << (d.degenerate ? ", degenerate" : "") << '\n';
    for (const auto& w : d.warnings) std::cerr << "warning: " << w << '\n';
}

int run_decompose(const Common& c, const DecomposeFlags& f)
{
    const auto r = load(c);
    const auto cfg = f.config();
    const auto d = decompose(r, cfg);
    const auto dir = out_dir(c);
    std::ostringstream s, e;
    write_record(s, d.signal);
    write_record(e, d.residual);
    write_file(dir / "signal.csv", s.str());
    write_file(dir / "residual.csv", e.str());
    write_file(dir / "moments.json", moments_json(d, cfg, unit_of(c, r)).dump(1) + "\n");
    print_flags(d);
    return 0;
}

int run_report(const Common& c, const DecomposeFlags& f)
{
    const auto r = load(c);
    ReportOptions opt;
    opt.config = f.config();
    opt.time_unit = unit_of(c, r);
    const auto d = decompose(r, opt.config);
    for (const auto& p : write_report(r, d, out_dir(c), opt)) std::cout << p.string() << '\n';
    print_flags(d);
    return 0;
}

struct SynthFlags {
    std::string output = ".";
    std::string preset = "paper-like";
    std::uint64_t seed = 1;
    std::size_t samples = 0;
    double period = 0.0, snr_db = std::numeric_limits<double>::quiet_NaN(),
           drift_speed = std::numeric_limits<double>::quiet_NaN(), amplitude = 1.0, dt = 1.0;
    std::string time_unit = "days";
};

int run_synth(const SynthFlags& f)
{
    auto s = preset_scenario(parse_preset(f.preset));
    s.seed = f.seed;
    if (f.samples > 0) s.samples = f.samples;
    if (f.period > 0.0) s.period = f.period;
    if (!std::isnan(f.snr_db)) s.snr_db = f.snr_db;
    if (!std::isnan(f.drift_speed)) s.drift_speed = f.drift_speed;
    s.amplitude = f.amplitude;
    s.dt = f.dt;
    s.time_unit = f.time_unit;
    const auto syn = synthesize_scenario(s);
    Common c;
    c.output = f.output;
    const auto dir = out_dir(c);
    std::ostringstream rec, sig;
    write_record(rec, syn.record);
    write_record(sig, syn.truth.signal);
    write_file(dir / "record.csv", rec.str());
    write_file(dir / "truth_signal.csv", sig.str());
    write_file(dir / "truth_moments.json", moments_json(syn.truth, DecomposeConfig{}, s.time_unit).dump(1) + "\n");
    if (s.preset == Preset::fig3_amplitude || s.preset == Preset::fig3_deformation ||
        s.preset == Preset::fig3_precession)
        write_file(dir / "stability.svg", stability_svg({syn.truth.ellipse}, {to_string(s.preset)}));
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Bivariate instantaneous moments, modulated ellipses and wavelet ridges", "bivar"};
    app.require_subcommand(1);

    Common c_an, c_mo, c_el, c_tr, c_ri, c_de, c_re;
    DecomposeFlags f_tr, f_ri, f_de, f_re;
    SynthFlags sf;

    auto* an = app.add_subcommand("analytic", "analytic signals x+ and y+");
    add_common(an, c_an, true);
    auto* mo = app.add_subcommand("moments", "univariate and joint instantaneous moments");
    add_common(mo, c_mo, true);
    auto* el = app.add_subcommand("ellipse", "modulated-ellipse parameters and bandwidth terms");
    add_common(el, c_el, true);
    auto* tr = app.add_subcommand("transform", "Morse wavelet transform of x and y");
    add_common(tr, c_tr, false);
    add_decompose(tr, f_tr);
    auto* ri = app.add_subcommand("ridges", "wavelet ridges of x and y");
    add_common(ri, c_ri, false);
    add_decompose(ri, f_ri);
    auto* de = app.add_subcommand("decompose", "split a record into elliptical signal and residual");
    add_common(de, c_de, false);
    add_decompose(de, f_de);
    auto* re = app.add_subcommand("report", "decompose and write the full report");
    add_common(re, c_re, false);
    add_decompose(re, f_re);

    auto* sy = app.add_subcommand("synth", "write a synthetic eddy-plus-drift record with its truth");
    sy->add_option("-o,--output", sf.output, "output directory")->capture_default_str();
    sy->add_option("--preset", sf.preset, "scenario preset")
        ->check(CLI::IsMember({"paper-like", "circle", "linear", "fig3-amplitude", "fig3-deformation",
                               "fig3-precession"}))
        ->capture_default_str();
    sy->add_option("--seed", sf.seed, "noise seed")->capture_default_str();
    sy->add_option("--samples", sf.samples, "record length (default: preset)");
    sy->add_option("--period", sf.period, "orbital period in time units (default: preset)");
    sy->add_option("--snr-db", sf.snr_db, "signal to noise ratio in dB, inf for none (default: preset)");
    sy->add_option("--drift-speed", sf.drift_speed, "drift speed over orbital speed (default: preset)");
    sy->add_option("--amplitude", sf.amplitude, "eddy amplitude kappa, 0 for pure drift")->capture_default_str();
    sy->add_option("--dt", sf.dt, "sampling interval")->check(CLI::PositiveNumber)->capture_default_str();
    sy->add_option("--time-unit", sf.time_unit, "time unit name")->capture_default_str();

    CLI11_PARSE(app, argc, argv);
    try {
        if (*an) return run_analytic(c_an);
        if (*mo) return run_moments(c_mo);
        if (*el) return run_ellipse(c_el);
        if (*tr) return run_transform(c_tr, f_tr);
        if (*ri) return run_ridges(c_ri, f_ri);
        if (*de) return run_decompose(c_de, f_de);
        if (*re) return run_report(c_re, f_re);
        if (*sy) return run_synth(sf);
    } catch (const std::exception& e) {
        std::cerr << "bivar: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
