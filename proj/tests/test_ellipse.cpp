// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "bivar/ellipse.hpp"
#include "bivar/spectral.hpp"
#include "bivar/uni_moments.hpp"

using namespace bivar;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Smooth ellipse: n samples, `per` samples per orbit, slow modulations.
EllipseSeries smooth_ellipse(std::size_t n, double per, int rz, double lam0 = 0.4, double dt = 1.0)
{
    std::vector<double> k(n), l(n), th(n), ph(n);
    const double T = static_cast<double>(n) * dt, w = two_pi / (per * dt);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = dt * static_cast<double>(i), u = t / T;
        k[i] = 1.0 + 0.3 * std::sin(two_pi * u);
        l[i] = rz * (lam0 + 0.2 * std::sin(two_pi * u + 1.0));
        th[i] = 0.3 + 0.8 * u;
        ph[i] = w * t + 0.5 * std::cos(two_pi * u);
    }
    return make_ellipse(SampleGrid{0.0, dt, n}, k, l, th, ph, rz);
}

double max_abs(const std::vector<double>& a, const std::vector<double>& b, std::size_t lo, std::size_t hi)
{
    double m = 0.0;
    for (std::size_t k = lo; k < hi; ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

} // namespace

TEST_CASE("rotary amplitudes carry the RMS amplitude", "[ellipse]")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> kd(0.01, 10.0), ld(-1.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double kappa = kd(rng), lambda = ld(rng);
        const int rz = lambda < 0 ? -1 : 1;
        const auto [ap, an] = rotary_amplitudes(kappa, lambda, rz);
        CHECK_THAT(ap * ap + an * an, WithinRel(kappa * kappa, 1e-12));
        CHECK_THAT(rz * 2.0 * ap * an / (ap * ap + an * an), WithinAbs(lambda, 1e-12));
        CHECK((rz > 0 ? ap >= an : an >= ap));
    }
    const auto [cp, cn] = rotary_amplitudes(2.0, 0.0, 1);
    CHECK(cn == 0.0);
    CHECK_THAT(cp, WithinRel(2.0, 1e-15));
}

TEST_CASE("ellipse parameters survive the rotary and Cartesian round trip", "[ellipse]")
{
    for (int rz : {1, -1}) {
        const auto e = smooth_ellipse(400, 37.0, rz);
        const auto back = rotary_to_ellipse(cartesian_to_rotary(rotary_to_cartesian(ellipse_to_rotary(e))));
        CHECK(back.rz == rz);
        CHECK_FALSE(back.rz_tie);
        CHECK(back.rz_conflicts == 0);
        CHECK(max_abs(back.kappa.values, e.kappa.values, 0, 400) < 1e-12);
        CHECK(max_abs(back.lambda.values, e.lambda.values, 0, 400) < 1e-10);
        const auto t0 = e.theta_normalized(), t1 = back.theta_normalized();
        const auto p0 = e.phi_normalized(), p1 = back.phi_normalized();
        for (std::size_t k = 0; k < 400; ++k) {
            CHECK_THAT(t1[k], WithinAbs(t0[k], 1e-9));
            CHECK(std::abs(wrap_to_pi(p1[k] - p0[k])) < 1e-9);
        }
    }
}

TEST_CASE("synthesis agrees with the rotary construction", "[ellipse]")
{
    const auto e = smooth_ellipse(300, 25.0, -1);
    const auto syn = synthesize(e);
    const auto cart = rotary_to_cartesian(ellipse_to_rotary(e));
    for (std::size_t k = 0; k < 300; ++k) {
        CHECK(std::abs(syn.analytic.xp[k] - cart.xp[k]) < 1e-12);
        CHECK(std::abs(syn.analytic.yp[k] - cart.yp[k]) < 1e-12);
        CHECK_THAT(syn.x[k], WithinAbs(syn.analytic.xp[k].real(), 1e-12));
        CHECK_THAT(syn.y[k], WithinAbs(syn.analytic.yp[k].real(), 1e-12));
    }
}

TEST_CASE("the model analytic pair is close to the Hilbert-transform pair", "[ellipse]")
{
    // With 100 samples per orbit and slow modulation the model pair is nearly
    // analytic. Padding by reflection reverses the rotation at the edges, so
    // the circular transform is used.
    const auto e = smooth_ellipse(3000, 100.0, 1);
    const auto syn = synthesize(e);
    const auto hx = analytic_signal(syn.x);
    for (std::size_t k = 600; k < 2400; ++k) CHECK(std::abs(hx[k] - syn.analytic.xp[k]) < 2e-3);
}

TEST_CASE("circles and lines", "[ellipse][edge]")
{
    const std::size_t n = 200;
    const SampleGrid g{0.0, 1.0, n};
    std::vector<complex> cx(n), cy(n), lx(n), ly(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double p = 0.3 * static_cast<double>(k);
        cx[k] = std::polar(1.0, p);
        cy[k] = std::polar(1.0, p - pi / 2.0);  // y = sin
        lx[k] = std::polar(2.0, p);
    }
    const auto circle = rotary_to_ellipse(cartesian_to_rotary({AnalyticSeries(g, cx), AnalyticSeries(g, cy)}));
    CHECK(circle.rz == 1);
    for (std::size_t k = 0; k < n; ++k) {
        CHECK_THAT(circle.lambda[k], WithinAbs(0.0, 1e-12));
        CHECK_THAT(circle.kappa[k], WithinRel(1.0, 1e-12));
    }
    const auto line = rotary_to_ellipse(cartesian_to_rotary({AnalyticSeries(g, lx), AnalyticSeries(g, ly)}));
    CHECK(line.rz_tie);
    for (std::size_t k = 0; k < n; ++k) {
        CHECK_THAT(std::abs(line.lambda[k]), WithinAbs(1.0, 1e-12));
        CHECK_THAT(line.theta_normalized()[k], WithinAbs(0.0, 1e-12));
    }
    const auto syn = synthesize(line);
    for (std::size_t k = 0; k < n; ++k) {
        CHECK_THAT(syn.x[k], WithinAbs(lx[k].real(), 1e-12));
        CHECK_THAT(syn.y[k], WithinAbs(0.0, 1e-12));
    }
}

TEST_CASE("only one rotary component leaves theta unobservable but keeps the track", "[ellipse][edge]")
{
    const std::size_t n = 50;
    const SampleGrid g{0.0, 1.0, n};
    std::vector<complex> zp(n), zn(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) zp[k] = std::polar(1.0, 0.2 * static_cast<double>(k));
    zn[10] = 1e-20;
    const auto e = rotary_to_ellipse({AnalyticSeries(g, zp), AnalyticSeries(g, zn)});
    const auto back = ellipse_to_rotary(e);
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(back.zp[k] - zp[k]) < 1e-12);
}

TEST_CASE("zero signal is fully masked", "[ellipse][edge]")
{
    const SampleGrid g{0.0, 1.0, 8};
    const AnalyticSeries z(g, std::vector<complex>(8));
    const auto e = rotary_to_ellipse({z, z});
    for (std::size_t k = 0; k < 8; ++k) CHECK(e.masked(k));
}

TEST_CASE("normalized angles describe the same ellipse", "[ellipse]")
{
    const std::size_t n = 64;
    std::vector<double> k(n, 1.0), l(n, 0.5), th(n), ph(n);
    for (std::size_t i = 0; i < n; ++i) {
        th[i] = -5.0 + 0.3 * static_cast<double>(i);
        ph[i] = 0.9 * static_cast<double>(i);
    }
    const auto e = make_ellipse(SampleGrid{0.0, 1.0, n}, k, l, th, ph, 1);
    const auto tn = e.theta_normalized(), pn = e.phi_normalized();
    const auto syn = synthesize(e);
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(tn[i] > -pi / 2.0);
        CHECK(tn[i] <= pi / 2.0);
        CHECK(pn[i] > -pi);
        CHECK(pn[i] <= pi);
        const complex z = std::polar(1.0, tn[i]) *
                          complex(e.semi_major(i) * std::cos(pn[i]), e.semi_minor(i) * std::sin(pn[i]));
        CHECK(std::abs(z - complex(syn.x[i], syn.y[i])) < 1e-12);
    }
    CHECK(EllipseSeries::half_turns(pi / 2.0) == 0.0);
    CHECK(EllipseSeries::half_turns(-pi / 2.0) == -1.0);
}

TEST_CASE("rotating the pair advances theta", "[ellipse]")
{
    const auto e = smooth_ellipse(200, 30.0, 1);
    const auto pair = synthesize(e).analytic;
    const auto r = rotary_to_ellipse(cartesian_to_rotary(rotate(pair, 0.7)));
    for (std::size_t k = 0; k < 200; ++k) {
        CHECK_THAT(r.kappa[k], WithinRel(e.kappa[k], 1e-12));
        CHECK(std::abs(wrap_to_pi(2.0 * (r.theta[k] - e.theta[k] - 0.7))) < 1e-9);
    }
}

TEST_CASE("Cartesian amplitudes and phases follow from the ellipse", "[ellipse]")
{
    const auto e = smooth_ellipse(300, 40.0, -1);
    const auto cp = cartesian_params_from_ellipse(e);
    const auto syn = synthesize(e);
    for (std::size_t k = 0; k < 300; ++k) {
        CHECK(std::abs(std::polar(cp.ax[k], cp.phix[k]) - syn.analytic.xp[k]) < 1e-12);
        CHECK(std::abs(std::polar(cp.ay[k], cp.phiy[k]) - syn.analytic.yp[k]) < 1e-12);
    }
}

TEST_CASE("closed-form component moments match direct differentiation", "[ellipse]")
{
    // Oracle: instantaneous moments of the synthesized components, computed
    // directly from their amplitude and phase. Both sides use second-order
    // differences, so they agree to O(dt^2).
    const auto e = smooth_ellipse(4000, 200.0, 1, 0.3);
    const auto syn = synthesize(e);
    const auto cm = cartesian_moments_from_ellipse(e);
    const auto wx = inst_frequency(syn.analytic.xp), ux = inst_bandwidth(syn.analytic.xp);
    const auto wy = inst_frequency(syn.analytic.yp), uy = inst_bandwidth(syn.analytic.yp);
    const double w0 = two_pi / 200.0;
    for (std::size_t k = 400; k < 3600; ++k) {
        CHECK_THAT(cm.omega_x[k], WithinAbs(wx[k], 1e-4 * w0));
        CHECK_THAT(cm.omega_y[k], WithinAbs(wy[k], 1e-4 * w0));
        CHECK_THAT(cm.upsilon_x[k], WithinAbs(ux[k], 1e-4 * w0));
        CHECK_THAT(cm.upsilon_y[k], WithinAbs(uy[k], 1e-4 * w0));
    }
    const auto rot = ellipse_to_rotary(e);
    const auto rm = rotary_moments_from_ellipse(e);
    const auto wp = inst_frequency(rot.zp), up = inst_bandwidth(rot.zp);
    const auto wn = inst_frequency(rot.zn), un = inst_bandwidth(rot.zn);
    for (std::size_t k = 400; k < 3600; ++k) {
        CHECK_THAT(rm.omega_p[k], WithinAbs(wp[k], 1e-6 * w0));
        CHECK_THAT(rm.omega_n[k], WithinAbs(wn[k], 1e-6 * w0));
        CHECK_THAT(rm.upsilon_p[k], WithinAbs(up[k], 1e-4 * w0));
        CHECK_THAT(rm.upsilon_n[k], WithinAbs(un[k], 1e-4 * w0));
    }
}

TEST_CASE("snapshots freeze the geometry for one orbit", "[ellipse]")
{
    const auto e = smooth_ellipse(200, 20.0, 1);
    const auto s = snapshot(e, 100, 90, {5.0, -2.0});
    REQUIRE(s.polyline.size() == 91);
    CHECK(s.polyline.front().x == s.polyline.back().x);
    CHECK(s.polyline.front().y == s.polyline.back().y);
    CHECK(s.timestamp == 100.0);
    double rmax = 0.0, rmin = 1e9;
    for (const auto& p : s.polyline) {
        const double r = std::hypot(p.x - 5.0, p.y + 2.0);
        rmax = std::max(rmax, r);
        rmin = std::min(rmin, r);
    }
    CHECK_THAT(rmax, WithinRel(e.semi_major(100), 1e-3));
    CHECK_THAT(rmin, WithinRel(std::abs(e.semi_minor(100)), 1e-3));
    const auto syn = synthesize(e);
    CHECK_THAT(s.polyline.front().x, WithinAbs(5.0 + syn.x[100], 1e-12));
    CHECK_THROWS_AS(snapshot(e, 200, 10), std::out_of_range);
    CHECK_THROWS_AS(snapshot(e, 10, 2), std::invalid_argument);
}

TEST_CASE("ellipse parameters are validated", "[ellipse][errors]")
{
    const SampleGrid g{0.0, 1.0, 4};
    const std::vector<double> one(4, 1.0), zero(4, 0.0);
    CHECK_THROWS_AS(make_ellipse(g, one, zero, zero, zero, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_ellipse(g, {1, 1, -1, 1}, zero, zero, zero, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_ellipse(g, one, {0, 1.5, 0, 0}, zero, zero, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_ellipse(g, one, zero, {0, NAN, 0, 0}, zero, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_ellipse(g, one, zero, zero, {0, 0}, 1), std::invalid_argument);
}
