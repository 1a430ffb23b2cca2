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
#include "test_support.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace nlosia::test
{

std::filesystem::path scenario_path(const std::string &name)
{
    return std::filesystem::path(NLOSIA_SCENARIO_DIR) / (name + ".json");
}

Scenario bundled(const std::string &name) { return load_scenario(scenario_path(name)); }

Scenario narrow_beam_reference(double bs_aperture)
{
    Scenario s = reference_scenario(1.2);
    s.array = BsArray::for_aperture(bs_aperture, s.ofdm.wavelength());
    s.synthesis.noise = false;
    s.targets.clear();
    return s;
}

ImageGrid single_target_image(const Scenario &scenario, const TargetState &target, Vec2 xi)
{
    const SensingSystem sys = build_system(scenario);
    const std::array<TargetState, 1> scene{target};
    const EchoTensor e = synthesize(sys, scene, scenario.seed, scenario.synthesis);
    return backproject(sys, e, scenario_grid(scenario), xi, backproject_options(scenario));
}

double azimuth_resolution(const Scenario &scenario)
{
    const SensingSystem sys = build_system(scenario);
    const PolarPoint c = PolarPoint::from_cartesian(scenario.geometry.roi.center);
    return scenario.ofdm.wavelength() / (2.0 * roi_effective_aperture(sys) * std::cos(c.angle));
}

double spurious_azimuth_db(const ImageGrid &image, const Box &roi, std::span<const double> angles,
                           double rho_psi)
{
    const double peak = find_peak(image).magnitude;
    double spur = 0.0;
    for (const auto &m : local_maxima(image))
    {
        if (!roi.contains(PolarPoint{m.axis1, m.axis2}.to_cartesian()))
            continue;
        const bool near = std::any_of(angles.begin(), angles.end(),
                                      [&](double a) { return std::abs(m.axis2 - a) < 2.0 * rho_psi; });
        if (!near)
            spur = std::max(spur, m.magnitude);
    }
    if (spur <= 0.0 || peak <= 0.0)
        return -std::numeric_limits<double>::infinity();
    return to_db20(spur / peak);
}

} // namespace nlosia::test
