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

#include "nlosia/reflector.hpp"

#include <algorithm>
#include <array>
#include <fmt/format.h>
#include <ostream>

namespace nlosia
{

namespace
{

// Meta-atoms at lambda/4 spacing, symmetric about the reflector center, and the module grid.
ReflectorDesign layout(const SceneGeometry &geom, int module_count, double wavelength)
{
    geom.validate();
    if (!(wavelength > 0.0))
        throw Error("reflector: wavelength must be positive");
    ReflectorDesign d;
    d.wavelength = wavelength;
    d.meta_atom_spacing = wavelength / 4;
    const int atoms = std::max(1, static_cast<int>(std::lround(geom.reflector_length() / d.meta_atom_spacing)));
    if (module_count < 1)
        throw Error("reflector: module count must be at least 1");
    if (module_count > atoms)
        throw Error(fmt::format("reflector: module count {} exceeds meta-atom count {}", module_count, atoms));
    d.module_count = module_count;
    const double length = atoms * d.meta_atom_spacing;
    d.module_length = length / module_count;
    d.atom_positions.resize(atoms);
    d.atom_module.resize(atoms);
    for (int m = 0; m < atoms; ++m)
    {
        const double x = (m - 0.5 * (atoms - 1)) * d.meta_atom_spacing;
        d.atom_positions[m] = x;
        d.atom_module[m] = std::min(module_count - 1, static_cast<int>(std::floor((x + length / 2) / d.module_length)));
    }
    for (int n = 0; n < module_count; ++n)
        d.module_centers.push_back(-length / 2 + (n + 0.5) * d.module_length);
    return d;
}

double angle_from_center(Vec2 p) { return std::atan2(p.x, p.y); }

// Incidence angle of the profile beam whose center lands nearest x.
double nearest_beam_incidence(const Codebook &profile, const SceneGeometry &geom, double x)
{
    if (profile.entries.empty())
        return incidence_angle_for_point(x, geom);
    double best = profile.entries.front().angle, best_dist = 1e300;
    for (const auto &e : profile.entries)
    {
        const double dist = std::abs(incidence_point(e.angle, geom) - x);
        if (dist < best_dist)
        {
            best_dist = dist;
            best = e.angle;
        }
    }
    return best;
}

} // namespace

const char *to_string(DesignKind kind)
{
    switch (kind)
    {
    case DesignKind::ModularLinear:
        return "modular";
    case DesignKind::Lens:
        return "lens";
    case DesignKind::Mirror:
        return "mirror";
    }
    return "unknown";
}

std::pair<int, int> ReflectorDesign::atoms_in(double lo, double hi) const
{
    const int atoms = atom_count();
    if (atoms == 0 || hi < lo)
        return {0, 0};
    const double x0 = atom_positions.front();
    int first = static_cast<int>(std::ceil((lo - x0) / meta_atom_spacing - 1e-9));
    int last = static_cast<int>(std::floor((hi - x0) / meta_atom_spacing + 1e-9)) + 1;
    first = std::clamp(first, 0, atoms);
    last = std::clamp(last, first, atoms);
    return {first, last};
}

ReflectorDesign design_modular(const SceneGeometry &geom, int module_count,
                               const Codebook &incidence_profile, double wavelength)
{
    ReflectorDesign d = layout(geom, module_count, wavelength);
    d.kind = DesignKind::ModularLinear;
    const Vec2 lo = geom.roi.lower(), hi = geom.roi.upper();
    const std::array<Vec2, 4> corners{Vec2{lo.x, lo.y}, Vec2{hi.x, lo.y}, Vec2{lo.x, hi.y}, Vec2{hi.x, hi.y}};
    double a_min = 1e300, a_max = -1e300;
    for (const Vec2 &c : corners)
    {
        a_min = std::min(a_min, angle_from_center(c));
        a_max = std::max(a_max, angle_from_center(c));
    }
    d.reflection_center = angle_from_center(geom.roi.center);
    d.reflection_span = a_max - a_min;
    const double length = d.length();
    for (int n = 0; n < module_count; ++n)
    {
        const double xn = d.module_centers[n];
        d.module_reflection_angles.push_back(d.reflection_center + d.reflection_span / length * xn);
        d.module_incidence_angles.push_back(nearest_beam_incidence(incidence_profile, geom, xn));
    }
    // Per-module gradient; module offsets keep the profile continuous across boundaries.
    const double k = kTwoPi / wavelength;
    double phase = 0.0;
    for (int m = 0; m < d.atom_count(); ++m)
    {
        const int n = d.atom_module[m];
        const double grad = std::sin(d.module_incidence_angles[n]) - std::sin(d.module_reflection_angles[n]);
        if (m > 0)
            phase += k * (d.atom_positions[m] - d.atom_positions[m - 1]) * grad;
        else
            phase = k * d.atom_positions[0] * grad;
        d.meta_atom_phases.push_back(wrap_two_pi(phase));
    }
    return d;
}

ReflectorDesign design_lens(const SceneGeometry &geom, Vec2 focus_xy, double wavelength, int module_count)
{
    if (!(focus_xy.y > 0.0))
        throw Error("lens: focus must lie in y > 0");
    ReflectorDesign d = layout(geom, module_count, wavelength);
    d.kind = DesignKind::Lens;
    d.focus = focus_xy;
    d.reflection_center = angle_from_center(focus_xy);
    for (int n = 0; n < module_count; ++n)
    {
        const double xn = d.module_centers[n];
        d.module_reflection_angles.push_back(std::atan2(focus_xy.x - xn, focus_xy.y));
        d.module_incidence_angles.push_back(incidence_angle_for_point(xn, geom));
    }
    const double k = kTwoPi / wavelength;
    for (double x : d.atom_positions)
    {
        const Vec2 p{x, 0.0};
        d.meta_atom_phases.push_back(wrap_two_pi(k * ((p - geom.bs_position).norm() + (focus_xy - p).norm())));
    }
    return d;
}

ReflectorDesign design_mirror(const SceneGeometry &geom, double incidence_angle, double reflection_angle,
                              double wavelength)
{
    ReflectorDesign d = layout(geom, 1, wavelength);
    d.kind = DesignKind::Mirror;
    d.reflection_center = reflection_angle;
    d.module_reflection_angles = {reflection_angle};
    d.module_incidence_angles = {incidence_angle};
    const double k = kTwoPi / wavelength;
    const double grad = std::sin(incidence_angle) - std::sin(reflection_angle);
    for (double x : d.atom_positions)
        d.meta_atom_phases.push_back(wrap_two_pi(k * x * grad));
    return d;
}

ReflectorDesign design_anomalous_mirror(const SceneGeometry &geom, const Codebook &incidence_profile,
                                        double wavelength)
{
    const double theta_i = nearest_beam_incidence(incidence_profile, geom, 0.0);
    return design_mirror(geom, theta_i, angle_from_center(geom.roi.center), wavelength);
}

Complex reflection_gain(const ReflectorDesign &design, std::span<const int> atoms, double theta_i,
                        Vec2 pixel_xy, const SceneGeometry &geom, double reference_x)
{
    const double k = kTwoPi / design.wavelength;
    const double theta_o = reflection_angle_to_target(theta_i, pixel_xy, geom);
    const double grad = std::sin(theta_i) - std::sin(theta_o);
    Complex s{0.0, 0.0};
    for (int m : atoms)
        s += std::polar(1.0, design.meta_atom_phases[m] - k * (design.atom_positions[m] - reference_x) * grad);
    return s * s;
}

double module_pattern(const ReflectorDesign &design, int module, double psi)
{
    if (module < 0 || module >= design.module_count)
        throw Error("module pattern: module index out of range");
    const double theta_o = design.module_reflection_angles[module];
    const double rho = design.wavelength / (2.0 * design.module_length * std::cos(theta_o));
    return sinc((std::sin(psi) - std::sin(theta_o)) / rho);
}

EffectiveAperture effective_aperture_discrete(const ReflectorDesign &design, PolarPoint target)
{
    const Vec2 r = target.to_cartesian();
    if (!(r.y > 0.0))
        throw Error("effective aperture: target must lie in y > 0");
    EffectiveAperture ea;
    for (int n = 0; n < design.module_count; ++n)
    {
        const double xn = design.module_centers[n];
        const double theta_o = design.module_reflection_angles[n];
        const double psi_n = std::atan((r.x - xn) / r.y);
        const double rho = design.wavelength / (2.0 * design.module_length * std::cos(theta_o));
        if (std::abs(psi_n - theta_o) <= rho)
            ea.module_set.push_back(n);
    }
    if (!ea.module_set.empty())
    {
        const double half = design.length() / 2;
        ea.lo = std::max(-half, design.module_centers[ea.module_set.front()] - design.module_length / 2);
        ea.hi = std::min(half, design.module_centers[ea.module_set.back()] + design.module_length / 2);
        ea.length = static_cast<double>(ea.module_set.size()) * design.module_length;
    }
    return ea;
}

EffectiveAperture effective_aperture_closed_form(const ReflectorDesign &design, PolarPoint target)
{
    if (design.kind != DesignKind::ModularLinear)
        throw Error("effective aperture: closed form requires a modular linear design");
    const double half = design.length() / 2;
    const double tb = design.reflection_center;
    const double rho = design.wavelength / (2.0 * design.module_length * std::cos(tb));
    const double slope = design.reflection_span / design.length();
    const double curv = std::cos(target.angle) / target.radius;
    const double offset = target.angle - tb;
    const double den_lo = slope * (1.0 + rho * std::tan(tb)) + curv;
    const double den_hi = slope * (1.0 - rho * std::tan(tb)) + curv;
    EffectiveAperture ea;
    double lo = -half, hi = half;
    if (den_lo > 0.0)
        lo = (offset - rho) / den_lo;
    else
        ea.unbounded = true;
    if (den_hi > 0.0)
        hi = (offset + rho) / den_hi;
    else
        ea.unbounded = true;
    if (lo > hi)
        ea.endpoints_crossed = true;
    ea.lo = std::clamp(lo, -half, half);
    ea.hi = std::clamp(hi, -half, half);
    ea.length = std::max(0.0, ea.hi - ea.lo);
    for (int n = 0; n < design.module_count; ++n)
        if (design.module_centers[n] >= ea.lo && design.module_centers[n] <= ea.hi)
            ea.module_set.push_back(n);
    return ea;
}

void count_effective_beams(EffectiveAperture &aperture, const Codebook &codebook, const SceneGeometry &geom)
{
    aperture.effective_beam_count = 0;
    if (aperture.length <= 0.0)
        return;
    for (const auto &e : codebook.entries)
    {
        const double x = incidence_point(e.angle, geom);
        if (x >= aperture.lo && x <= aperture.hi)
            ++aperture.effective_beam_count;
    }
}

double single_module_aperture(double beam_footprint, double bs_aperture, double module_length)
{
    return beam_footprint <= module_length ? bs_aperture : module_length;
}

void write_design_csv(std::ostream &os, const ReflectorDesign &design)
{
    os << "atom_index,x_m,phase_rad,module\n";
    for (int m = 0; m < design.atom_count(); ++m)
        os << fmt::format("{},{:.12g},{:.12g},{}\n", m, design.atom_positions[m], design.meta_atom_phases[m],
                          design.atom_module[m]);
}

BeamIllumination::BeamIllumination(const ReflectorDesign &design, const SceneGeometry &geom, double theta_i,
                                   const Footprint &footprint)
    : k_(kTwoPi / design.wavelength), spacing_(design.meta_atom_spacing), theta_i_(theta_i),
      incidence_x_(incidence_point(theta_i, geom)), incidence_distance_(nlosia::incidence_distance(incidence_x_, geom))
{
    if (footprint.misses_reflector)
        return;
    std::tie(first_atom_, last_atom_) = design.atoms_in(footprint.lo, footprint.hi);
    if (empty())
        return;
    first_offset_ = design.atom_positions[first_atom_] - incidence_x_;
    weights_.reserve(atom_count());
    for (int m = first_atom_; m < last_atom_; ++m)
    {
        const double d_i = nlosia::incidence_distance(design.atom_positions[m], geom);
        weights_.push_back(std::polar(1.0, design.meta_atom_phases[m] - k_ * (d_i - incidence_distance_)));
    }
}

Complex BeamIllumination::gain(Vec2 pixel_xy) const
{
    if (weights_.empty())
        return {0.0, 0.0};
    const double dx = pixel_xy.x - incidence_x_;
    const double d_o = std::hypot(dx, pixel_xy.y);
    const double u = dx / d_o;
    const double g = k_ * (pixel_xy.y / d_o) * (pixel_xy.y / d_o) / (2.0 * d_o);
    // Phase k u delta - g delta^2 with delta = first_offset + i * spacing.
    const double d0 = first_offset_, d = spacing_;
    Complex term = std::polar(1.0, k_ * u * d0 - g * d0 * d0);
    Complex step = std::polar(1.0, k_ * u * d - g * (2.0 * d0 * d + d * d));
    const Complex step_ratio = std::polar(1.0, -2.0 * g * d * d);
    Complex s{0.0, 0.0};
    for (const Complex &w : weights_)
    {
        s += w * term;
        term *= step;
        step *= step_ratio;
    }
    return s * s;
}

} // namespace nlosia
