// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cmath>

#include "bivar/ellipse.hpp"
#include "bivar/joint_moments.hpp"
#include "bivar/ridge.hpp"
#include "bivar/uni_moments.hpp"
#include "bivar/wavelet.hpp"
#include "oracles.hpp"

using namespace bivar;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const SampleGrid grid1500{0.0, 1.0, 1500};

RealSeries signal(const SampleGrid& g, const std::function<double(double)>& f)
{
    std::vector<double> v(g.n);
    for (std::size_t k = 0; k < g.n; ++k) v[k] = f(g.time(k));
    return RealSeries(g, std::move(v));
}

double mean(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

EllipseSeries modulated_ellipse(const SampleGrid& g, double period, int rz)
{
    std::vector<double> k(g.n), l(g.n), th(g.n), ph(g.n);
    const double T = g.duration();
    for (std::size_t i = 0; i < g.n; ++i) {
        const double t = g.time(i), u = t / T;
        k[i] = 2.0 - std::cos(two_pi * u);
        l[i] = rz * (0.3 + 0.1 * std::sin(two_pi * u));
        th[i] = 0.5 + 1.2 * u;
        ph[i] = two_pi / period * t;
    }
    return make_ellipse(g, k, l, th, ph, rz);
}

} // namespace

TEST_CASE("parabolic refinement and quadratic interpolation", "[ridge]")
{
    // log|W| = -(j - 0.3)^2 sampled at -1, 0, 1 peaks at 0.3.
    const auto y = [](double j) { return -(j - 0.3) * (j - 0.3); };
    CHECK_THAT(detail::parabolic_offset(y(-1), y(0), y(1)), WithinAbs(0.3, 1e-14));
    CHECK(detail::parabolic_offset(1.0, 1.0, 1.0) == 0.0);
    const auto q = [](double j) { return complex(1.0 + 2.0 * j - j * j, 3.0 * j); };
    CHECK(std::abs(detail::quadratic_value(q(-1), q(0), q(1), 0.37) - q(0.37)) < 1e-14);
}

TEST_CASE("a single tone gives one steady ridge", "[ridge]")
{
    const auto scales = default_scale_grid();
    const double w0 = two_pi / 20.0;
    const auto w = cwt(signal(grid1500, [&](double t) { return std::cos(w0 * t); }), scales);
    const auto ridges = ridge_detect(w);
    REQUIRE(ridges.size() == 1);
    const auto& r = ridges[0];
    CHECK(r.length() >= 1400);
    const double m = mean(r.scale_index);
    double var = 0.0;
    for (std::size_t i = 150; i + 150 < r.length(); ++i) var += (r.scale_index[i] - m) * (r.scale_index[i] - m);
    CHECK(std::sqrt(var / static_cast<double>(r.length() - 300)) < 0.1);

    // Recovered analytic signal: amplitude within 2%, phase slope within 1%.
    const auto xp = ridge_to_analytic(r, grid1500);
    const auto f = inst_frequency(xp);
    for (std::size_t k = 150; k < 1350; ++k) {
        CHECK_THAT(std::abs(xp[k]), WithinAbs(1.0, 0.02));
        CHECK_THAT(f[k], WithinRel(w0, 0.01));
        CHECK_THAT(f[k], WithinRel(r.inst_frequency[k - r.first], 0.02));
    }
}

TEST_CASE("tones four or more bands apart give two ridges", "[ridge]")
{
    // 6 and 24 sample periods on the default grid are about 25 bands apart;
    // 10 and 20 are 11 bands apart.
    const auto scales = default_scale_grid();
    for (auto [p1, p2] : {std::pair{6.0, 24.0}, {10.0, 20.0}}) {
        const auto x = signal(grid1500, [&](double t) { return std::cos(two_pi / p1 * t) + std::cos(two_pi / p2 * t); });
        const auto ridges = ridge_detect(cwt(x, scales));
        REQUIRE(ridges.size() == 2);
        const double f1 = ridges[0].mean_frequency(), f2 = ridges[1].mean_frequency();
        CHECK_THAT(std::max(f1, f2), WithinRel(two_pi / p1, 0.02));
        CHECK_THAT(std::min(f1, f2), WithinRel(two_pi / p2, 0.02));
    }
}

TEST_CASE("white noise rarely yields ridges above the noise floor", "[ridge]")
{
    const auto scales = default_scale_grid();
    int empty = 0;
    const int trials = 20;
    for (int seed = 1; seed <= trials; ++seed) {
        const RealSeries x(grid1500, oracle::gaussian_noise(1500, static_cast<unsigned>(seed), 0.7));
        RidgeOptions opt;
        opt.min_length = static_cast<std::size_t>(2.0 * 53.0);
        opt.noise_std = 0.7;
        if (ridge_detect(cwt(x, scales), opt).empty()) ++empty;
    }
    CHECK(empty >= (9 * trials) / 10);
}

TEST_CASE("an amplitude-modulated tone is tracked by its ridge", "[ridge]")
{
    // Envelope varying on a 10-period scale.
    const double w0 = two_pi / 20.0;
    const auto env = [](double t) { return 1.0 + 0.5 * std::sin(two_pi * t / 200.0); };
    const auto x = signal(grid1500, [&](double t) { return env(t) * std::cos(w0 * t); });
    const auto ridges = ridge_detect(cwt(x, default_scale_grid(), {}, Padding::mirror));
    REQUIRE(ridges.size() == 1);
    const auto xp = ridge_to_analytic(ridges[0], grid1500);
    for (std::size_t k = 150; k < 1350; ++k) CHECK_THAT(std::abs(xp[k]), WithinRel(env(static_cast<double>(k)), 0.05));
}

TEST_CASE("ridge analytic signals are zero off support", "[ridge][edge]")
{
    RidgeCurve r;
    r.first = 3;
    r.values = {1.0, complex(0.0, 2.0)};
    r.scale_index = {1.0, 1.0};
    r.inst_frequency = {0.5, 0.5};
    const auto xp = ridge_to_analytic(r, SampleGrid{0.0, 1.0, 8});
    for (std::size_t k = 0; k < 8; ++k) {
        if (k == 3 || k == 4) continue;
        CHECK(xp[k] == complex(0.0));
    }
    CHECK(xp[4] == complex(0.0, 2.0));
    CHECK_THROWS_AS(ridge_to_analytic(RidgeCurve{}, SampleGrid{0.0, 1.0, 8}), std::invalid_argument);
    r.first = 7;
    CHECK_THROWS_AS(ridge_to_analytic(r, SampleGrid{0.0, 1.0, 8}), std::invalid_argument);
}

TEST_CASE("zero input gives no ridges", "[ridge][edge]")
{
    const auto w = cwt(RealSeries(grid1500, std::vector<double>(1500)), default_scale_grid());
    CHECK(ridge_detect(w).empty());
}

TEST_CASE("ridges shift with the input", "[ridge]")
{
    // A wave packet away from the edges under a circular transform; the
    // modulus floor keeps ridges off the negligible tails.
    const SampleGrid g{0.0, 1.0, 1024};
    const auto packet = [](double t, double c) {
        return std::exp(-(t - c) * (t - c) / (2.0 * 60.0 * 60.0)) * std::cos(two_pi / 16.0 * t);
    };
    RidgeOptions opt;
    opt.min_modulus = 1e-3;
    const auto a =
        ridge_detect(cwt(signal(g, [&](double t) { return packet(t, 400.0); }), default_scale_grid()), opt);
    const auto b =
        ridge_detect(cwt(signal(g, [&](double t) { return packet(t - 64.0, 400.0); }), default_scale_grid()), opt);
    REQUIRE(a.size() == b.size());
    REQUIRE_FALSE(a.empty());
    // Compare the strongest ridge of each.
    const auto strongest = [](const std::vector<RidgeCurve>& rs) {
        std::size_t best = 0;
        for (std::size_t i = 0; i < rs.size(); ++i)
            if (rs[i].length() > rs[best].length()) best = i;
        return rs[best];
    };
    const auto ra = strongest(a), rb = strongest(b);
    CHECK(rb.first == ra.first + 64);
    CHECK(rb.length() == ra.length());
    for (std::size_t i = 0; i < ra.length(); ++i) CHECK(std::abs(rb.values[i] - ra.values[i]) < 1e-7);
}

TEST_CASE("trimming to the cone of influence shortens edge ridges", "[ridge]")
{
    const auto scales = default_scale_grid();
    const auto w = cwt(signal(grid1500, [](double t) { return std::cos(two_pi / 40.0 * t); }), scales);
    RidgeOptions opt;
    opt.trim_coi = true;
    const auto full = ridge_detect(w), trimmed = ridge_detect(w, opt);
    REQUIRE(full.size() == 1);
    REQUIRE(trimmed.size() == 1);
    CHECK(trimmed[0].first > full[0].first);
    CHECK(trimmed[0].end() < full[0].end());
    const double coi = w.coi[static_cast<std::size_t>(std::lround(trimmed[0].scale_index.front()))];
    CHECK(static_cast<double>(trimmed[0].first) >= coi);
}

TEST_CASE("a circle combines into a near-zero linearity", "[ridge][bivariate]")
{
    const double w0 = two_pi / 20.0;
    const auto x = signal(grid1500, [&](double t) { return std::cos(w0 * t); });
    const auto y = signal(grid1500, [&](double t) { return std::sin(w0 * t); });
    const auto scales = default_scale_grid();
    const auto est = combine_bivariate_ridges(ridge_detect(cwt(x, scales)), ridge_detect(cwt(y, scales)), grid1500);
    REQUIRE(est.pairs == 1);
    CHECK_FALSE(est.degenerate);
    CHECK(est.ellipse.rz == 1);
    for (std::size_t k = 150; k < 1350; ++k) CHECK(std::abs(est.ellipse.lambda[k]) < 0.05);
}

TEST_CASE("a line falls back to the single-ridge estimate", "[ridge][bivariate]")
{
    const auto x = signal(grid1500, [](double t) { return 2.0 * std::cos(two_pi / 20.0 * t); });
    const RealSeries y(grid1500, std::vector<double>(1500));
    const auto scales = default_scale_grid();
    const auto ry = ridge_detect(cwt(y, scales));
    CHECK(ry.empty());
    const auto est = combine_bivariate_ridges(ridge_detect(cwt(x, scales)), ry, grid1500);
    CHECK(est.degenerate);
    CHECK(est.pairs == 0);
    REQUIRE_FALSE(est.warnings.empty());
    for (std::size_t k = 150; k < 1350; ++k) {
        CHECK_THAT(std::abs(est.ellipse.lambda[k]), WithinAbs(1.0, 1e-12));
        // Semi-major axis kappa sqrt(1 + |lambda|) equals the line amplitude.
        CHECK_THAT(est.ellipse.kappa[k] * std::sqrt(2.0), WithinRel(2.0, 0.02));
    }
    const auto none = combine_bivariate_ridges({}, {}, grid1500);
    CHECK(none.empty);
}

TEST_CASE("a modulated ellipse is recovered from its ridges", "[ridge][bivariate]")
{
    for (int rz : {1, -1}) {
        const auto truth = modulated_ellipse(grid1500, 20.0, rz);
        const auto syn = synthesize(truth);
        const auto scales = default_scale_grid();
        const auto est = combine_bivariate_ridges(ridge_detect(cwt(syn.x, scales)), ridge_detect(cwt(syn.y, scales)),
                                                  grid1500);
        REQUIRE(est.pairs == 1);
        CHECK(est.ellipse.rz == rz);
        const auto wz = bivariate_frequency_from_ellipse(est.ellipse), wt = bivariate_frequency_from_ellipse(truth);
        for (std::size_t k = 150; k < 1350; ++k) {
            CHECK_THAT(est.ellipse.kappa[k], WithinRel(truth.kappa[k], 0.05));
            CHECK_THAT(wz[k], WithinRel(wt[k], 0.05));
        }
    }
}

TEST_CASE("doubling the number of bands barely moves the estimate", "[ridge][bivariate]")
{
    const auto truth = modulated_ellipse(grid1500, 20.0, 1);
    const auto syn = synthesize(truth);
    const auto run = [&](std::size_t bands) {
        const auto scales = ScaleGrid::from_periods(2.6, 53.0, bands);
        return combine_bivariate_ridges(ridge_detect(cwt(syn.x, scales)), ridge_detect(cwt(syn.y, scales)), grid1500);
    };
    const auto a = run(50), b = run(100);
    for (std::size_t k = 150; k < 1350; ++k) CHECK_THAT(b.ellipse.kappa[k], WithinRel(a.ellipse.kappa[k], 0.01));
}

TEST_CASE("pairing needs at least half overlap", "[ridge][bivariate]")
{
    const auto make = [](std::size_t first, std::size_t len) {
        RidgeCurve r;
        r.first = first;
        r.values.assign(len, complex(1.0));
        r.scale_index.assign(len, 10.0);
        r.inst_frequency.assign(len, 0.3);
        return r;
    };
    CHECK(ridge_overlap(make(0, 100), make(50, 100)) == 50);
    CHECK(ridge_overlap(make(0, 10), make(20, 10)) == 0);
    const SampleGrid g{0.0, 1.0, 400};
    const auto paired = combine_bivariate_ridges({make(0, 100)}, {make(40, 100)}, g);
    CHECK(paired.pairs == 1);
    const auto unpaired = combine_bivariate_ridges({make(0, 100)}, {make(60, 100)}, g);
    CHECK(unpaired.pairs == 0);
    CHECK(unpaired.degenerate);
    // Two disjoint pairs both contribute.
    const auto two = combine_bivariate_ridges({make(0, 100), make(200, 100)}, {make(0, 100), make(200, 100)}, g);
    CHECK(two.pairs == 2);
    CHECK(two.pair.xp[250] == complex(1.0));
    CHECK(two.pair.xp[150] == complex(0.0));
}
