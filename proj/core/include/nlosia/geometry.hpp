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

#include "nlosia/common.hpp"

namespace nlosia
{

// BS at [-D_x, D_y], reflector on y = 0 spanning [-A/2, A/2], ROI in y > 0.
struct SceneGeometry
{
    Vec2 bs_position;
    double reflector_half_length = 0.0;
    Box roi;

    double d_x() const { return -bs_position.x; }
    double d_y() const { return bs_position.y; }
    double reflector_length() const { return 2.0 * reflector_half_length; }

    // Throws Error naming the violated invariant.
    void validate() const;

    // BS placed so that a beam at incidence_center hits the reflector center.
    static SceneGeometry from_incidence(double bs_height, double incidence_center,
                                        double reflector_length, Box roi);
};

// Radius from the reflector center, angle from the reflector normal (positive toward +x).
struct PolarPoint
{
    double radius = 1.0;
    double angle = 0.0;

    Vec2 to_cartesian() const;
    static PolarPoint from_cartesian(Vec2 p);
    void validate() const;
};

struct TargetState
{
    PolarPoint position;
    double velocity_radial = 0.0;
    double velocity_transverse = 0.0;
    double rcs = 1.0;
    double scattering_phase = 0.0;
    Complex reflection_coefficient{1.0, 0.0};

    Vec2 position_xy() const { return position.to_cartesian(); }
    Vec2 velocity_xy() const;
    // sqrt(rcs) * exp(j scattering_phase) * reflection_coefficient
    Complex reflectivity() const;
    void validate() const;
};

// Radial unit vector [sin psi, cos psi] and transverse [-cos psi, sin psi].
Vec2 radial_unit(double psi);
Vec2 transverse_unit(double psi);

// Polar velocity components about psi mapped to Cartesian.
Vec2 polar_velocity(double psi, double v_radial, double v_transverse);

double incidence_point(double theta_i, const SceneGeometry &geom);

// Inverse of incidence_point.
double incidence_angle_for_point(double x_on_reflector, const SceneGeometry &geom);

double reflection_angle_to_target(double theta_i, Vec2 target_xy, const SceneGeometry &geom);

// Incident leg length from the BS to a reflector point.
double incidence_distance(double x_on_reflector, const SceneGeometry &geom);

double two_way_delay(double beam_incidence_x, Vec2 pixel_xy, const SceneGeometry &geom);

// R - sin(psi) x + cos^2(psi) x^2 / (2R)
double parabolic_outgoing_distance(double x_on_reflector, PolarPoint target);

} // namespace nlosia
