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

#include "nlosia/codebook.hpp"
#include "nlosia/geometry.hpp"

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace nlosia
{

enum class DesignKind
{
    ModularLinear,
    Lens,
    Mirror
};

const char *to_string(DesignKind kind);

struct ReflectorDesign
{
    DesignKind kind = DesignKind::ModularLinear;
    double wavelength = 0.02;
    double meta_atom_spacing = 0.005;
    int module_count = 1;
    double module_length = 0.0;
    std::vector<double> module_centers;
    std::vector<double> module_reflection_angles;
    std::vector<double> module_incidence_angles;
    std::vector<double> atom_positions;
    std::vector<double> meta_atom_phases;
    std::vector<int> atom_module;
    double reflection_center = 0.0;
    double reflection_span = 0.0;
    Vec2 focus;

    int atom_count() const { return static_cast<int>(atom_positions.size()); }
    double length() const { return atom_count() * meta_atom_spacing; }
    int meta_atoms_per_module() const { return atom_count() / module_count; }
    // Atoms with position in [lo, hi] as a half-open index range.
    std::pair<int, int> atoms_in(double lo, double hi) const;
};

ReflectorDesign design_modular(const SceneGeometry &geom, int module_count,
                               const Codebook &incidence_profile, double wavelength);

ReflectorDesign design_lens(const SceneGeometry &geom, Vec2 focus_xy, double wavelength,
                            int module_count = 1);

// Single anomalous module steering incidence_angle to reflection_angle.
ReflectorDesign design_mirror(const SceneGeometry &geom, double incidence_angle,
                              double reflection_angle, double wavelength);

// Anomalous mirror from the codebook center toward the ROI center.
ReflectorDesign design_anomalous_mirror(const SceneGeometry &geom, const Codebook &incidence_profile,
                                        double wavelength);

// Far-field gain of a set of atoms for incidence theta_i toward pixel_xy.
// Phases are referenced to reference_x along the reflector.
Complex reflection_gain(const ReflectorDesign &design, std::span<const int> atoms, double theta_i,
                        Vec2 pixel_xy, const SceneGeometry &geom, double reference_x = 0.0);

double module_pattern(const ReflectorDesign &design, int module, double psi);

struct EffectiveAperture
{
    double lo = 0.0;
    double hi = 0.0;
    double length = 0.0;
    std::vector<int> module_set;
    int effective_beam_count = 0;
    bool unbounded = false;
    bool endpoints_crossed = false;
};

EffectiveAperture effective_aperture_discrete(const ReflectorDesign &design, PolarPoint target);

// Requires a ModularLinear design.
EffectiveAperture effective_aperture_closed_form(const ReflectorDesign &design, PolarPoint target);

// Fills effective_beam_count from beams whose incidence point lies in the interval.
void count_effective_beams(EffectiveAperture &aperture, const Codebook &codebook,
                           const SceneGeometry &geom);

// Aperture used for resolution when at most one module is effective.
double single_module_aperture(double beam_footprint, double bs_aperture, double module_length);

void write_design_csv(std::ostream &os, const ReflectorDesign &design);

// Per-beam reflection gain with an exact incident leg and a second-order outgoing leg
// about the beam incidence point. Used by both synthesis and back-projection.
class BeamIllumination
{
public:
    BeamIllumination() = default;
    BeamIllumination(const ReflectorDesign &design, const SceneGeometry &geom, double theta_i,
                     const Footprint &footprint);

    Complex gain(Vec2 pixel_xy) const;

    double incidence_angle() const { return theta_i_; }
    double incidence_x() const { return incidence_x_; }
    double incidence_distance() const { return incidence_distance_; }
    int first_atom() const { return first_atom_; }
    int last_atom() const { return last_atom_; }
    int atom_count() const { return last_atom_ - first_atom_; }
    bool empty() const { return atom_count() <= 0; }

private:
    std::vector<Complex> weights_;
    double k_ = 0.0;
    double spacing_ = 0.0;
    double first_offset_ = 0.0;
    double theta_i_ = 0.0;
    double incidence_x_ = 0.0;
    double incidence_distance_ = 0.0;
    int first_atom_ = 0;
    int last_atom_ = 0;
};

} // namespace nlosia
