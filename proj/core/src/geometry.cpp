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

#include "nlosia/geometry.hpp"

#include <string>

namespace nlosia
{

void SceneGeometry::validate() const
{
    if (!(d_y() > 0.0))
        throw Error("geometry: BS must lie strictly above the reflector plane (D_y > 0)");
    if (!(reflector_half_length > 0.0))
        throw Error("geometry: reflector length must be positive");
    if (!(roi.size.x >= 0.0 && roi.size.y >= 0.0))
        throw Error("geometry: ROI size must be non-negative");
    if (!(roi.lower().y > 0.0))
        throw Error("geometry: ROI must lie strictly in y > 0");
}

SceneGeometry SceneGeometry::from_incidence(double bs_height, double incidence_center,
                                            double reflector_length, Box roi)
{
    SceneGeometry g;
    g.bs_position = {-bs_height * std::tan(incidence_center), bs_height};
    g.reflector_half_length = reflector_length / 2;
    g.roi = roi;
    return g;
}

Vec2 PolarPoint::to_cartesian() const { return {radius * std::sin(angle), radius * std::cos(angle)}; }

PolarPoint PolarPoint::from_cartesian(Vec2 p) { return {p.norm(), std::atan2(p.x, p.y)}; }

void PolarPoint::validate() const
{
    if (!(radius > 0.0))
        throw Error("polar point: radius must be positive");
    if (!(std::abs(angle) < kPi / 2))
        throw Error("polar point: |angle| must be below pi/2");
}

Vec2 radial_unit(double psi) { return {std::sin(psi), std::cos(psi)}; }

Vec2 transverse_unit(double psi) { return {-std::cos(psi), std::sin(psi)}; }

Vec2 polar_velocity(double psi, double v_radial, double v_transverse)
{
    return radial_unit(psi) * v_radial + transverse_unit(psi) * v_transverse;
}

Vec2 TargetState::velocity_xy() const
{
    return polar_velocity(position.angle, velocity_radial, velocity_transverse);
}

Complex TargetState::reflectivity() const
{
    return std::sqrt(rcs) * std::polar(1.0, scattering_phase) * reflection_coefficient;
}

void TargetState::validate() const
{
    position.validate();
    if (!(rcs >= 0.0))
        throw Error("target: rcs must be non-negative");
    if (!(scattering_phase >= 0.0 && scattering_phase < kTwoPi))
        throw Error("target: scattering phase must lie in [0, 2 pi)");
}

double incidence_point(double theta_i, const SceneGeometry &geom)
{
    return geom.d_y() * std::tan(theta_i) - geom.d_x();
}

double incidence_angle_for_point(double x_on_reflector, const SceneGeometry &geom)
{
    return std::atan((x_on_reflector + geom.d_x()) / geom.d_y());
}

double reflection_angle_to_target(double theta_i, Vec2 target_xy, const SceneGeometry &geom)
{
    const double x_l = incidence_point(theta_i, geom);
    return std::atan((target_xy.x - x_l) / target_xy.y);
}

double incidence_distance(double x_on_reflector, const SceneGeometry &geom)
{
    return (Vec2{x_on_reflector, 0.0} - geom.bs_position).norm();
}

double two_way_delay(double beam_incidence_x, Vec2 pixel_xy, const SceneGeometry &geom)
{
    const Vec2 p{beam_incidence_x, 0.0};
    return 2.0 * ((p - geom.bs_position).norm() + (pixel_xy - p).norm()) / kSpeedOfLight;
}

double parabolic_outgoing_distance(double x_on_reflector, PolarPoint target)
{
    const double s = std::sin(target.angle), c = std::cos(target.angle);
    const double x = x_on_reflector;
    return target.radius - s * x + c * c * x * x / (2.0 * target.radius);
}

} // namespace nlosia
