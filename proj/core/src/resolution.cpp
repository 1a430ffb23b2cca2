// SPDX-License-Identifier: Apache-2.0
//
// nlosia: NLOS radar imaging embedded in a base-station beam sweep
// Copyright (C) 2026 The nlosia authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "nlosia/resolution.hpp"

#include <algorithm>
#include <limits>

namespace nlosia
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

double range_factor(PolarPoint target, double a_eff, double f0, double bandwidth, double *f_plus, double *f_minus)
{
    const double r0 = target.radius, psi0 = target.angle;
    const double fp = std::atan((r0 * std::sin(psi0) + 0.5 * a_eff) / (r0 * std::cos(psi0))) - psi0;
    const double fm = std::atan((r0 * std::sin(psi0) - 0.5 * a_eff) / (r0 * std::cos(psi0))) - psi0;
    if (f_plus)
        *f_plus = fp;
    if (f_minus)
        *f_minus = fm;
    return f0 / bandwidth * (1.0 - std::cos(fp));
}

void check_target(PolarPoint target)
{
    target.validate();
    if (std::abs(std::cos(target.angle)) < 1e-9)
        throw Error("resolution: undefined at grazing angle");
}

} // namespace

ResolutionReport nf_resolution(PolarPoint target, double a_eff, const OfdmConfig &cfg)
{
    check_target(target);
    if (!(a_eff > 0.0))
        throw Error("resolution: effective aperture must be positive");
    const double b = cfg.bandwidth();
    const double lambda = cfg.wavelength();
    ResolutionReport r;
    r.a_eff_used = a_eff;
    r.kappa_R = range_factor(target, a_eff, cfg.carrier_frequency, b, &r.F_plus, &r.F_minus);
    r.rho_R_ff = kSpeedOfLight / (2.0 * b);
    r.rho_R_nf = r.rho_R_ff / (1.0 + r.kappa_R);
    const double cos0 = std::cos(target.angle);
    const double span = std::sin(r.F_plus) - std::sin(r.F_minus);
    r.rho_psi_ff = lambda / (2.0 * a_eff * cos0);
    r.rho_psi_nf = lambda / (2.0 * target.radius * span);
    r.kappa_psi = 1.0 - target.radius / (a_eff * cos0) * span;
    return r;
}

double solve_aperture_for_range_factor(PolarPoint target, double kappa, const OfdmConfig &cfg)
{
    check_target(target);
    if (!(kappa >= 0.0))
        throw Error("resolution: range factor must be non-negative");
    const double f0 = cfg.carrier_frequency, b = cfg.bandwidth();
    auto k_of = [&](double a) { return range_factor(target, a, f0, b, nullptr, nullptr); };
    double hi = target.radius;
    while (k_of(hi) < kappa)
    {
        hi *= 2.0;
        if (hi > 1e9 * target.radius)
            throw Error("resolution: range factor not attainable at this geometry");
    }
    double lo = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        (k_of(mid) < kappa ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

SpectralCoverage spectral_coverage(PolarPoint target, double x_lo, double x_hi, const OfdmConfig &cfg, int n_x,
                                   int n_f)
{
    target.validate();
    if (n_x < 1 || n_f < 1)
        throw Error("coverage: sample counts must be positive");
    if (x_hi < x_lo)
        throw Error("coverage: interval is reversed");
    SpectralCoverage c;
    c.target = target;
    c.x_lo = x_lo;
    c.x_hi = x_hi;
    c.carrier_frequency = cfg.carrier_frequency;
    c.bandwidth = cfg.bandwidth();
    c.n_x = n_x;
    c.n_f = n_f;
    c.wavevectors.reserve(static_cast<std::size_t>(n_x) * n_f);
    const Vec2 r = target.to_cartesian();
    for (int ix = 0; ix < n_x; ++ix)
    {
        const double x = n_x == 1 ? 0.5 * (x_lo + x_hi) : x_lo + (x_hi - x_lo) * ix / (n_x - 1);
        const Vec2 d = r - Vec2{x, 0.0};
        const Vec2 u = d * (1.0 / d.norm());
        for (int jf = 0; jf < n_f; ++jf)
        {
            const double f = c.carrier_frequency + (n_f == 1 ? 0.0 : c.bandwidth * (jf / (n_f - 1.0) - 0.5));
            c.wavevectors.push_back(u * (4.0 * kPi * f / kSpeedOfLight));
        }
    }
    return c;
}

ResolutionReport resolution_from_coverage(const SpectralCoverage &coverage)
{
    if (coverage.wavevectors.empty())
        throw Error("coverage: empty coverage");
    const double k0 = 4.0 * kPi * coverage.carrier_frequency / kSpeedOfLight;
    // Arc at the carrier, one point per aperture sample.
    std::vector<Vec2> arc(coverage.n_x);
    for (int ix = 0; ix < coverage.n_x; ++ix)
    {
        const Vec2 k = coverage.at(ix, 0);
        arc[ix] = k * (k0 / k.norm());
    }
    const Vec2 a = arc.front(), b = arc.back();
    const Vec2 chord_vec = b - a;
    const double chord = chord_vec.norm();
    double depth = 0.0;
    if (chord > 0.0)
    {
        const Vec2 n{-chord_vec.y / chord, chord_vec.x / chord};
        for (const Vec2 &p : arc)
            depth = std::max(depth, std::abs((p - a).dot(n)));
    }
    const double dk_band = 4.0 * kPi * coverage.bandwidth / kSpeedOfLight;
    const double dk_r = depth + dk_band;
    const double r0 = coverage.target.radius;
    const double a_eff = coverage.x_hi - coverage.x_lo;
    ResolutionReport r;
    r.a_eff_used = a_eff;
    r.rho_R_ff = dk_band > 0.0 ? 2.0 * kPi / dk_band : kInf;
    r.rho_R_nf = dk_r > 0.0 ? 2.0 * kPi / dk_r : kInf;
    r.kappa_R = dk_band > 0.0 ? depth / dk_band : kInf;
    r.rho_psi_nf = chord > 0.0 ? 2.0 * kPi / chord / r0 : kInf;
    const double cos0 = std::cos(coverage.target.angle);
    r.rho_psi_ff = a_eff > 0.0 ? kSpeedOfLight / coverage.carrier_frequency / (2.0 * a_eff * cos0) : kInf;
    r.kappa_psi = std::isfinite(r.rho_psi_nf) ? 1.0 - r.rho_psi_ff / r.rho_psi_nf : kInf;
    const double psi0 = coverage.target.angle;
    const Vec2 rxy = coverage.target.to_cartesian();
    r.F_plus = std::atan2(rxy.x - coverage.x_lo, rxy.y) - psi0;
    r.F_minus = std::atan2(rxy.x - coverage.x_hi, rxy.y) - psi0;
    return r;
}

namespace
{

constexpr double kHalfNullDb = -3.92;

// Width between the half-null crossings of a sampled cut through index i0.
double cut_width(const std::vector<double> &mag, int i0, double step)
{
    const int n = static_cast<int>(mag.size());
    const double level = mag[i0] * std::pow(10.0, kHalfNullDb / 20.0);
    auto interp = [&](double pos) {
        // Four-point Lagrange on the samples bracketing pos.
        int k = std::clamp(static_cast<int>(std::floor(pos)) - 1, 0, std::max(0, n - 4));
        if (n < 4)
            k = 0;
        double s = 0.0;
        const int m = std::min(4, n);
        for (int a = 0; a < m; ++a)
        {
            double w = 1.0;
            for (int c = 0; c < m; ++c)
                if (c != a)
                    w *= (pos - (k + c)) / static_cast<double>(a - c);
            s += w * mag[k + a];
        }
        return s;
    };
    auto crossing = [&](int dir) {
        int i = i0;
        while (i + dir >= 0 && i + dir < n && mag[i + dir] > level)
            i += dir;
        if (i + dir < 0 || i + dir >= n)
            throw Error("measured resolution: main lobe extends past the grid");
        double inside = i, outside = i + dir;
        for (int it = 0; it < 60; ++it)
        {
            const double mid = 0.5 * (inside + outside);
            (interp(mid) > level ? inside : outside) = mid;
        }
        return 0.5 * (inside + outside);
    };
    return (crossing(+1) - crossing(-1)) * step;
}

} // namespace

ResolutionReport measured_resolution(const ImageGrid &saf_image)
{
    const auto &g = saf_image.grid;
    if (g.kind != GridKind::Polar)
        throw Error("measured resolution: polar grid required");
    const PeakLocation peak = find_peak(saf_image);
    if (peak.on_boundary)
        throw Error("measured resolution: peak on grid boundary");
    std::vector<double> r_cut(g.axis1.count), psi_cut(g.axis2.count);
    for (int i = 0; i < g.axis1.count; ++i)
        r_cut[i] = saf_image.magnitude(i, peak.j);
    for (int j = 0; j < g.axis2.count; ++j)
        psi_cut[j] = saf_image.magnitude(peak.i, j);
    ResolutionReport r;
    r.rho_R_nf = cut_width(r_cut, peak.i, g.axis1.step);
    r.rho_psi_nf = cut_width(psi_cut, peak.j, g.axis2.step);
    return r;
}

} // namespace nlosia
