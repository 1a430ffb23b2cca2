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

#pragma once

#include "nlosia/geometry.hpp"
#include "nlosia/waveform.hpp"

#include <iosfwd>
#include <vector>

namespace nlosia
{

enum class BeamKind
{
    Standard3gpp,
    Imaging
};

const char *to_string(BeamKind kind);

struct CodebookEntry
{
    double angle = 0.0;
    BeamKind kind = BeamKind::Imaging;
};

struct Codebook
{
    std::vector<CodebookEntry> entries;
    double angular_step_imaging = 0.0;
    double angular_span_imaging = 0.0;
    double center_imaging = 0.0;

    std::size_t size() const { return entries.size(); }
    std::vector<double> angles() const;
    std::size_t count(BeamKind kind) const;
};

struct AngularInterval
{
    double lo = 0.0;
    double hi = 0.0;
    double span() const { return hi - lo; }
    double center() const { return 0.5 * (lo + hi); }
};

Codebook make_3gpp_codebook(const BsArray &array);

// Derivative of the two-way propagation phase with respect to the Tx angle.
double phase_rate_vs_txangle(double theta_i, Vec2 pixel_xy, const SceneGeometry &geom,
                             const OfdmConfig &cfg);

// Tx angles whose beam centers hit the reflector ends.
AngularInterval reflector_incidence_span(const SceneGeometry &geom);

// Largest angular step free of aliasing inside roi. Extrema over corners and edge midpoints.
double imaging_sampling_bound(const SceneGeometry &geom, const Box &roi, AngularInterval span,
                              const OfdmConfig &cfg);

// Beams spanning the reflector at the sampling bound. step_scale > 1 samples coarser.
Codebook make_imaging_codebook(const SceneGeometry &geom, const OfdmConfig &cfg,
                               double step_scale = 1.0);

// Imaging entries merged with the standard sweep, sorted by angle, duplicates dropped.
Codebook union_codebook(const Codebook &imaging, const Codebook &standard);

// Entries whose beam center lands on the reflector, in angular order.
Codebook reflector_subset(const Codebook &codebook, const SceneGeometry &geom);

struct IaDurations
{
    double standard = 0.0;
    double proposed = 0.0;
    double overhead = 0.0;
    int reflector_beams_standard = 0;
};

IaDurations ia_durations(const BsArray &array, const Codebook &imaging, const OfdmConfig &cfg);

struct Footprint
{
    double lo = 0.0;
    double hi = 0.0;
    double nominal_length = 0.0;
    bool misses_reflector = false;
    double length() const { return misses_reflector ? 0.0 : hi - lo; }
};

// Beam projection on the reflector, centered on the incidence point and clipped.
// At theta_i = 0 the full reflector is returned.
Footprint beam_footprint(double theta_i, const BsArray &array, const SceneGeometry &geom,
                         double wavelength);

void write_codebook_csv(std::ostream &os, const Codebook &codebook);

} // namespace nlosia
