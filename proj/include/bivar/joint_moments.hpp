// SPDX-License-Identifier: Apache-2.0
//
// Joint instantaneous moments of a vector of analytic signals and their
// bivariate forms in ellipse parameters.

#ifndef BIVAR_JOINT_MOMENTS_HPP
#define BIVAR_JOINT_MOMENTS_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "bivar/ellipse.hpp"
#include "bivar/fft.hpp"
#include "bivar/series.hpp"
#include "bivar/spectral.hpp"
#include "bivar/uni_moments.hpp"

namespace bivar {

/// N analytic signals on one grid.
struct AnalyticVector {
    std::vector<AnalyticSeries> components;

    AnalyticVector() = default;
    explicit AnalyticVector(std::vector<AnalyticSeries> c) : components(std::move(c))
    {
        if (components.empty()) throw std::invalid_argument("AnalyticVector: at least one component required");
        for (const auto& s : components) require_same_grid(s.grid, components.front().grid, "AnalyticVector");
    }

    const SampleGrid& grid() const { return components.front().grid; }
    std::size_t dimension() const { return components.size(); }
    std::size_t samples() const { return components.front().size(); }
};

inline AnalyticVector as_vector(const CartesianPair& c) { return AnalyticVector({c.xp, c.yp}); }
inline AnalyticVector as_vector(const RotaryPair& r) { return AnalyticVector({r.zp, r.zn}); }

/// How d x+/dt is discretized for the vector.
///  central  complex 2nd-order central difference applied to each component.
///           Linear, so every joint moment is exactly invariant under
///           scaled unitary maps.
///  polar    x+ (d ln|x+|/dt + i d phi/dt) per component, the univariate
///           scheme; joint moments of a 1-vector then equal uni_moments.
enum class Scheme { central, polar };

struct JointMoments {
    RealSeries frequency;
    RealSeries bandwidth;
    RealSeries second_central;
    GlobalMoments global;
    Spectrum joint_spectrum;
    double identity_residual = 0.0;  ///< max |sigma^2 - (omega - mean)^2 - upsilon^2| / sigma^2
};

/// S(w) = ||X+(w)||^2 / E with X+ = dt DFT(x+), so that sum S dw / 2pi = 1.
inline Spectrum joint_spectrum(const AnalyticVector& v)
{
    const auto& g = v.grid();
    g.validate();
    const std::size_t n = g.n, bins = n / 2 + 1;
    Spectrum s;
    s.bin_width = bin_frequency(1, g);
    s.frequencies.resize(bins);
    s.density.assign(bins, 0.0);
    double energy = 0.0;
    for (const auto& c : v.components) {
        const auto X = fft::forward(std::span<const complex>(c.values));
        for (std::size_t k = 0; k < bins; ++k) s.density[k] += std::norm(X[k]) * g.dt * g.dt;
        for (const auto& z : c.values) energy += std::norm(z);
    }
    energy *= g.dt;
    if (!(energy > 0.0)) throw std::invalid_argument("joint_spectrum: zero-energy signal");
    for (std::size_t k = 0; k < bins; ++k) {
        s.frequencies[k] = bin_frequency(static_cast<long>(k), g);
        s.density[k] /= energy;
    }
    s.energy = energy;
    return s;
}

inline GlobalMoments joint_global_moments(const AnalyticVector& v)
{
    const auto s = joint_spectrum(v);
    return spectral_moments(s.frequencies, s.density, s.energy);
}

namespace detail {

struct VectorState {
    std::vector<std::vector<complex>> x;   // component values
    std::vector<std::vector<complex>> dx;  // component derivatives
    std::vector<double> power;             // ||x+(t)||^2
    Mask mask;
};

inline VectorState vector_state(const AnalyticVector& v, Scheme scheme)
{
    const std::size_t n = v.samples(), m = v.dimension();
    v.grid().validate();
    VectorState st;
    st.power.assign(n, 0.0);
    st.mask.assign(n, false);
    for (const auto& c : v.components) {
        st.x.push_back(c.values);
        if (scheme == Scheme::central) {
            st.dx.push_back(derivative<complex>(std::span<const complex>(c.values), c.grid.dt));
        } else {
            const auto ld = log_derivative(c);
            std::vector<complex> d(n);
            for (std::size_t k = 0; k < n; ++k) d[k] = c[k] * complex(ld.bandwidth[k], ld.frequency[k]);
            st.dx.push_back(std::move(d));
        }
        for (std::size_t k = 0; k < n; ++k) {
            st.power[k] += std::norm(c[k]);
            if (c.masked(k)) st.mask[k] = true;
        }
    }
    const double peak = *std::max_element(st.power.begin(), st.power.end());
    const double floor = amplitude_floor * amplitude_floor * peak;
    for (std::size_t k = 0; k < n; ++k)
        if (st.power[k] < floor || peak == 0.0) st.mask[k] = true;
    (void)m;
    return st;
}

inline double frequency_at(const VectorState& st, std::size_t k)
{
    complex acc = 0.0;
    for (std::size_t c = 0; c < st.x.size(); ++c) acc += std::conj(st.x[c][k]) * st.dx[c][k];
    return acc.imag() / st.power[k];
}

/// ||dx - i w x||^2 / ||x||^2 at sample k.
inline double deviation_at(const VectorState& st, std::size_t k, double w)
{
    double acc = 0.0;
    for (std::size_t c = 0; c < st.x.size(); ++c) acc += std::norm(st.dx[c][k] - complex(0.0, w) * st.x[c][k]);
    return acc / st.power[k];
}

inline RealSeries finish(const SampleGrid& g, std::vector<double> values, const Mask& mask)
{
    for (std::size_t k = 0; k < values.size(); ++k)
        if (mask[k]) values[k] = 0.0;
    fill_masked(values, mask);
    return RealSeries(g, std::move(values), mask);
}

} // namespace detail

/// omega_x(t) = Im{x+^H dx+/dt} / ||x+||^2.
inline RealSeries joint_inst_frequency(const AnalyticVector& v, Scheme scheme = Scheme::central)
{
    const auto st = detail::vector_state(v, scheme);
    std::vector<double> out(v.samples());
    for (std::size_t k = 0; k < out.size(); ++k)
        if (!st.mask[k]) out[k] = detail::frequency_at(st, k);
    return detail::finish(v.grid(), std::move(out), st.mask);
}

/// sigma_x^2(t) = ||dx+/dt - i mean x+||^2 / ||x+||^2.
inline RealSeries joint_second_central(const AnalyticVector& v, double mean_frequency, Scheme scheme = Scheme::central)
{
    const auto st = detail::vector_state(v, scheme);
    std::vector<double> out(v.samples());
    for (std::size_t k = 0; k < out.size(); ++k)
        if (!st.mask[k]) out[k] = detail::deviation_at(st, k, mean_frequency);
    return detail::finish(v.grid(), std::move(out), st.mask);
}

/// upsilon_x(t) = ||dx+/dt - i omega_x(t) x+|| / ||x+||, nonnegative.
inline RealSeries joint_inst_bandwidth(const AnalyticVector& v, Scheme scheme = Scheme::central)
{
    const auto st = detail::vector_state(v, scheme);
    std::vector<double> out(v.samples());
    for (std::size_t k = 0; k < out.size(); ++k)
        if (!st.mask[k]) out[k] = std::sqrt(detail::deviation_at(st, k, detail::frequency_at(st, k)));
    return detail::finish(v.grid(), std::move(out), st.mask);
}

/// Every joint moment in one pass, second central moment about the joint
/// global mean frequency.
inline JointMoments joint_moments(const AnalyticVector& v, Scheme scheme = Scheme::central)
{
    JointMoments jm;
    jm.joint_spectrum = joint_spectrum(v);
    jm.global = spectral_moments(jm.joint_spectrum.frequencies, jm.joint_spectrum.density, jm.joint_spectrum.energy);
    const auto st = detail::vector_state(v, scheme);
    const std::size_t n = v.samples();
    std::vector<double> w(n), u(n), s2(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (st.mask[k]) continue;
        w[k] = detail::frequency_at(st, k);
        const double u2 = detail::deviation_at(st, k, w[k]);
        s2[k] = detail::deviation_at(st, k, jm.global.mean_frequency);
        u[k] = std::sqrt(u2);
        const double d = w[k] - jm.global.mean_frequency;
        if (s2[k] > 0.0) jm.identity_residual = std::max(jm.identity_residual, std::abs(s2[k] - d * d - u2) / s2[k]);
    }
    jm.frequency = detail::finish(v.grid(), std::move(w), st.mask);
    jm.bandwidth = detail::finish(v.grid(), std::move(u), st.mask);
    jm.second_central = detail::finish(v.grid(), std::move(s2), st.mask);
    return jm;
}

/// omega_z = omega_phi + rz sqrt(1 - lambda^2) omega_theta.
inline RealSeries bivariate_frequency_from_ellipse(const EllipseSeries& e)
{
    const auto wphi = orbital_frequency(e), wth = precession_rate(e);
    std::vector<double> out(e.size());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = wphi[k] + e.rz * std::sqrt(std::max(0.0, 1.0 - e.lambda[k] * e.lambda[k])) * wth[k];
    return RealSeries(e.grid(), std::move(out), e.mask);
}

/// The three terms of the bivariate bandwidth.
struct BandwidthDecomposition {
    RealSeries amplitude_bw;    ///< d ln kappa / dt
    RealSeries deformation_bw;  ///< (1/2) (d lambda/dt) / sqrt(1 - lambda^2)
    RealSeries precession_bw;   ///< lambda omega_theta

    /// sqrt of the sum of squares, masked wherever any term is.
    RealSeries total() const
    {
        std::vector<double> out(amplitude_bw.size());
        Mask m = merge_masks(merge_masks(amplitude_bw.mask, deformation_bw.mask), precession_bw.mask);
        for (std::size_t k = 0; k < out.size(); ++k)
            out[k] = std::sqrt(amplitude_bw[k] * amplitude_bw[k] + deformation_bw[k] * deformation_bw[k] +
                               precession_bw[k] * precession_bw[k]);
        return RealSeries(amplitude_bw.grid, std::move(out), std::move(m));
    }
};

/// |lambda| at or above this is treated as linear for the deformation term.
inline constexpr double linear_limit = 1.0 - 1e-9;

inline BandwidthDecomposition bandwidth_decomposition(const EllipseSeries& e)
{
    const std::size_t n = e.size();
    const double dt = e.grid().dt;
    const auto wth = precession_rate(e);
    const auto dlk = derivative<double>(detail::log_of(e.kappa), dt);
    const auto dl = derivative<double>(e.lambda.values, dt);
    std::vector<double> uk(n), ul(n), ut(n);
    Mask ml = e.mask.empty() ? Mask(n, false) : e.mask;
    for (std::size_t k = 0; k < n; ++k) {
        uk[k] = dlk[k];
        ut[k] = e.lambda[k] * wth[k];
        if (std::abs(e.lambda[k]) >= linear_limit) ml[k] = true;
        else ul[k] = 0.5 * dl[k] / std::sqrt(1.0 - e.lambda[k] * e.lambda[k]);
    }
    fill_masked(ul, ml);
    const auto& g = e.grid();
    return {RealSeries(g, std::move(uk), e.mask), RealSeries(g, std::move(ul), ml), RealSeries(g, std::move(ut), e.mask)};
}

/// Three equivalent expressions for |upsilon_lambda|, each differentiating
/// its own argument:
///   a: (1/2) |d lambda/dt| / sqrt(1 - lambda^2)
///   b: (1/2) |(1/lambda) d/dt sqrt(1 - lambda^2)|
///   c: |a b / (a^2 + b^2) d/dt ln(b/a)|
struct DeformationForms {
    RealSeries form_a, form_b, form_c;
};

inline DeformationForms deformation_equivalent_forms(const EllipseSeries& e)
{
    const std::size_t n = e.size();
    const double dt = e.grid().dt;
    std::vector<double> root(n), log_ratio(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double l = std::abs(e.lambda[k]);
        root[k] = std::sqrt(std::max(0.0, 1.0 - l * l));
        log_ratio[k] = l < linear_limit ? 0.5 * std::log((1.0 - l) / (1.0 + l)) : 0.0;
    }
    const auto dl = derivative<double>(e.lambda.values, dt);
    const auto droot = derivative<double>(root, dt);
    const auto dratio = derivative<double>(log_ratio, dt);
    Mask ma = e.mask.empty() ? Mask(n, false) : e.mask;
    Mask mb = ma, mc = ma;
    std::vector<double> fa(n), fb(n), fc(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double l = std::abs(e.lambda[k]);
        if (l >= linear_limit) ma[k] = true;
        else fa[k] = 0.5 * std::abs(dl[k]) / root[k];
        if (l < 1e-9) mb[k] = true;
        else fb[k] = 0.5 * std::abs(droot[k] / e.lambda[k]);
        const double a = e.semi_major(k), b = e.semi_minor(k);
        if (l >= linear_limit || a * std::abs(b) <= 0.0) mc[k] = true;
        else fc[k] = std::abs(a * b / (a * a + b * b) * dratio[k]);
    }
    fill_masked(fa, ma);
    fill_masked(fb, mb);
    fill_masked(fc, mc);
    const auto& g = e.grid();
    return {RealSeries(g, std::move(fa), ma), RealSeries(g, std::move(fb), mb), RealSeries(g, std::move(fc), mc)};
}

/// Dense row-major complex matrix, just enough for scaled unitary maps.
struct ComplexMatrix {
    std::size_t n = 0;
    std::vector<complex> a;

    explicit ComplexMatrix(std::size_t dim) : n(dim), a(dim * dim, complex(0.0)) {}
    static ComplexMatrix identity(std::size_t dim)
    {
        ComplexMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }
    complex& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
    const complex& operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }

    /// max |(U^H U - I)_ij|
    double unitarity_error() const
    {
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                complex s = 0.0;
                for (std::size_t k = 0; k < n; ++k) s += std::conj((*this)(k, i)) * (*this)(k, j);
                err = std::max(err, std::abs(s - (i == j ? 1.0 : 0.0)));
            }
        return err;
    }
};

/// The 2x2 rotation J(alpha) acting on a Cartesian vector.
inline ComplexMatrix rotation_matrix(double alpha)
{
    ComplexMatrix m(2);
    m(0, 0) = std::cos(alpha);
    m(0, 1) = -std::sin(alpha);
    m(1, 0) = std::sin(alpha);
    m(1, 1) = std::cos(alpha);
    return m;
}

/// y+ = c U x+. U must be unitary to 1e-12 and c nonzero.
inline AnalyticVector unitary_transform(const AnalyticVector& v, const ComplexMatrix& U, complex c)
{
    if (U.n != v.dimension()) throw std::invalid_argument("unitary_transform: matrix size does not match the vector");
    const double err = U.unitarity_error();
    if (!(err <= 1e-12))
        throw std::invalid_argument("unitary_transform: matrix is not unitary (|U^H U - I| = " + std::to_string(err) + ")");
    if (c == complex(0.0)) throw std::invalid_argument("unitary_transform: scale must be nonzero");
    const std::size_t n = v.samples(), m = v.dimension();
    std::vector<AnalyticSeries> out;
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<complex> vals(n, complex(0.0));
        for (std::size_t j = 0; j < m; ++j) {
            const complex w = c * U(i, j);
            for (std::size_t k = 0; k < n; ++k) vals[k] += w * v.components[j][k];
        }
        Mask mask;
        for (const auto& comp : v.components) mask = merge_masks(mask, comp.mask);
        out.emplace_back(v.grid(), std::move(vals), std::move(mask));
    }
    return AnalyticVector(std::move(out));
}

} // namespace bivar

#endif // BIVAR_JOINT_MOMENTS_HPP
