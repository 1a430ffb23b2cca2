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

#include "nlosia/codebook.hpp"

#include <algorithm>
#include <array>
#include <fmt/format.h>
#include <limits>
#include <ostream>

namespace nlosia
{

const char *to_string(BeamKind kind)
{
    return kind == BeamKind::Standard3gpp ? "3gpp" : "imaging";
}

std::vector<double> Codebook::angles() const
{
    std::vector<double> out;
    out.reserve(entries.size());
    for (const auto &e : entries)
        out.push_back(e.angle);
    return out;
}

std::size_t Codebook::count(BeamKind kind) const
{
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [&](const auto &e) { return e.kind == kind; }));
}

Codebook make_3gpp_codebook(const BsArray &array)
{
    array.validate();
    Codebook cb;
    const int k_beams = array.element_count;
    const double sector = deg2rad(120.0);
    const double step = sector / k_beams;
    for (int k = 0; k < k_beams; ++k)
        cb.entries.push_back({-sector / 2 + (k + 0.5) * step, BeamKind::Standard3gpp});
    return cb;
}

double phase_rate_vs_txangle(double theta_i, Vec2 pixel_xy, const SceneGeometry &geom,
                             const OfdmConfig &cfg)
{
    const double c = std::cos(theta_i);
    const double u = pixel_xy.x + geom.d_x() - geom.d_y() * std::tan(theta_i);
    const double bracket = std::sin(theta_i) - u / std::hypot(pixel_xy.y, u);
    return 4.0 * kPi * geom.d_y() / (cfg.wavelength() * c * c) * bracket;
}

AngularInterval reflector_incidence_span(const SceneGeometry &geom)
{
    return {incidence_angle_for_point(-geom.reflector_half_length, geom),
            incidence_angle_for_point(geom.reflector_half_length, geom)};
}

double imaging_sampling_bound(const SceneGeometry &geom, const Box &roi, AngularInterval span,
                              const OfdmConfig &cfg)
{
    if (!(roi.size.x > 0.0 && roi.size.y > 0.0))
        throw Error("sampling bound: ROI has zero area");
    if (!(span.span() >= 0.0))
        throw Error("sampling bound: angular span must be non-negative");
    const Vec2 lo = roi.lower(), hi = roi.upper(), c = roi.center;
    const std::array<Vec2, 8> pts{Vec2{lo.x, lo.y}, Vec2{hi.x, lo.y}, Vec2{lo.x, hi.y},
                                  Vec2{hi.x, hi.y}, Vec2{c.x, lo.y}, Vec2{c.x, hi.y},
                                  Vec2{lo.x, c.y},  Vec2{hi.x, c.y}};
    double max_hi = -std::numeric_limits<double>::infinity();
    double min_lo = std::numeric_limits<double>::infinity();
    for (const Vec2 &p : pts)
    {
        max_hi = std::max(max_hi, phase_rate_vs_txangle(span.hi, p, geom, cfg));
        min_lo = std::min(min_lo, phase_rate_vs_txangle(span.lo, p, geom, cfg));
    }
    const double spread = std::abs(max_hi - min_lo);
    if (spread == 0.0)
        return std::numeric_limits<double>::infinity();
    return kPi / spread;
}

Codebook make_imaging_codebook(const SceneGeometry &geom, const OfdmConfig &cfg, double step_scale)
{
    geom.validate();
    if (!(step_scale > 0.0))
        throw Error("imaging codebook: step scale must be positive");
    const AngularInterval span = reflector_incidence_span(geom);
    Codebook cb;
    cb.center_imaging = span.center();
    cb.angular_span_imaging = span.span();
    const double bound = span.span() > 1e-12 ? imaging_sampling_bound(geom, geom.roi, span, cfg) : 1.0;
    if (span.span() < bound * step_scale)
    {
        cb.entries.push_back({span.center(), BeamKind::Imaging});
        return cb;
    }
    const int count = static_cast<int>(std::ceil(span.span() / (bound * step_scale))) + 1;
    const double step = span.span() / (count - 1);
    cb.angular_step_imaging = step;
    for (int i = 0; i < count; ++i)
        cb.entries.push_back({span.lo + i * step, BeamKind::Imaging});
    return cb;
}

Codebook union_codebook(const Codebook &imaging, const Codebook &standard)
{
    Codebook out = imaging;
    for (const auto &e : standard.entries)
    {
        const bool duplicate = std::any_of(imaging.entries.begin(), imaging.entries.end(), [&](const auto &i) {
            return std::abs(i.angle - e.angle) < 1e-9;
        });
        if (!duplicate)
            out.entries.push_back(e);
    }
    std::stable_sort(out.entries.begin(), out.entries.end(),
                     [](const auto &a, const auto &b) { return a.angle < b.angle; });
    return out;
}

Codebook reflector_subset(const Codebook &codebook, const SceneGeometry &geom)
{
    Codebook out = codebook;
    out.entries.clear();
    for (const auto &e : codebook.entries)
    {
        const double x = incidence_point(e.angle, geom);
        if (std::abs(x) <= geom.reflector_half_length + 1e-12)
            out.entries.push_back(e);
    }
    return out;
}

IaDurations ia_durations(const BsArray &array, const Codebook &imaging, const OfdmConfig &cfg)
{
    const int k_beams = array.element_count;
    const int l_beams = static_cast<int>(imaging.count(BeamKind::Imaging));
    const double t = cfg.slot_duration();
    IaDurations d;
    d.reflector_beams_standard = l_beams == 0 ? 0
        : static_cast<int>(std::floor(k_beams * imaging.angular_span_imaging / (kTwoPi / 3.0)));
    d.standard = k_beams * t;
    d.proposed = (l_beams + k_beams - d.reflector_beams_standard) * t;
    d.overhead = d.proposed / d.standard;
    return d;
}

Footprint beam_footprint(double theta_i, const BsArray &array, const SceneGeometry &geom,
                         double wavelength)
{
    const double half = geom.reflector_half_length;
    Footprint f;
    const double sc = std::abs(std::sin(theta_i) * std::cos(theta_i));
    if (sc < 1e-12)
    {
        f.lo = -half;
        f.hi = half;
        f.nominal_length = std::numeric_limits<double>::infinity();
        return f;
    }
    const double theta_bs = array.beamwidth(theta_i, wavelength);
    f.nominal_length = geom.d_y() * theta_bs / sc;
    const double x = incidence_point(theta_i, geom);
    f.lo = std::max(-half, x - f.nominal_length / 2);
    f.hi = std::min(half, x + f.nominal_length / 2);
    if (f.hi <= f.lo)
    {
        f.misses_reflector = true;
        f.lo = f.hi = std::clamp(x, -half, half);
    }
    return f;
}

void write_codebook_csv(std::ostream &os, const Codebook &codebook)
{
    os << "index,angle_deg,kind\n";
    for (std::size_t i = 0; i < codebook.entries.size(); ++i)
        os << fmt::format("{},{:.12g},{}\n", i, rad2deg(codebook.entries[i].angle),
                          to_string(codebook.entries[i].kind));
}

} // namespace nlosia
