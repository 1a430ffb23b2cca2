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
#include "nlosia/oracle.hpp"
#include "nlosia/reflector.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <random>

using namespace nlosia;
using Catch::Approx;

namespace
{

struct Built
{
    Scenario scenario;
    Codebook codebook;
    ReflectorDesign design;
};

Built build(DesignKind kind, int modules = 15, double length = 1.2)
{
    Built b{reference_scenario(length), {}, {}};
    b.scenario.reflector.kind = kind;
    b.scenario.reflector.modules = kind == DesignKind::ModularLinear ? modules : 1;
    b.codebook = build_codebook(b.scenario);
    b.design = build_design(b.scenario, b.codebook);
    return b;
}

std::vector<int> all_atoms(const ReflectorDesign &d)
{
    std::vector<int> idx(d.atom_count());
    std::iota(idx.begin(), idx.end(), 0);
    return idx;
}

} // namespace

TEST_CASE("modular layout", "[reflector]")
{
    const Built b = build(DesignKind::ModularLinear);
    CHECK(b.design.module_count == 15);
    CHECK(b.design.module_length == Approx(0.08).epsilon(1e-3));
    CHECK(b.design.meta_atom_spacing == Approx(b.design.wavelength / 4));
    CHECK(b.design.length() == Approx(1.2).epsilon(1e-2));

    const Built one = build(DesignKind::ModularLinear, 1);
    const double centre = PolarPoint::from_cartesian(one.scenario.geometry.roi.center).angle;
    CHECK(one.design.module_reflection_angles[0] == Approx(centre).margin(1e-9));
}

TEST_CASE("modular design shrinks to a lens for a point ROI", "[reflector]")
{
    Built b = build(DesignKind::ModularLinear, 15);
    b.scenario.geometry.roi.size = {1e-4, 1e-4};
    const Codebook cb = build_codebook(b.scenario);
    const ReflectorDesign mod = build_design(b.scenario, cb);
    const PolarPoint c = PolarPoint::from_cartesian(b.scenario.geometry.roi.center);
    for (double a : mod.module_reflection_angles)
    {
        const double expected = std::atan2(c.to_cartesian().x, c.to_cartesian().y);
        CHECK(std::abs(a - expected) < 0.05);
    }
}

TEST_CASE("lens focuses all atoms coherently", "[reflector]")
{
    const Built b = build(DesignKind::Lens);
    const SceneGeometry &g = b.scenario.geometry;
    const double th = incidence_angle_for_point(0.0, g);
    const double half = 0.5 * b.design.length() + 1e-6;
    const Footprint whole{-half, half, 2.0 * half, false};
    const Complex gl = BeamIllumination(b.design, g, th, whole).gain(b.design.focus);
    const double m = b.design.atom_count();
    CHECK(std::abs(gl) / (m * m) > 0.95);

    const Built mod = build(DesignKind::ModularLinear);
    const Complex gm = BeamIllumination(mod.design, g, th, whole).gain(mod.scenario.geometry.roi.center);
    CHECK(std::abs(gl) >= std::abs(gm));
}

TEST_CASE("reflection gain limits", "[reflector]")
{
    Built b = build(DesignKind::Mirror);
    const SceneGeometry &g = b.scenario.geometry;
    const double th = incidence_angle_for_point(0.0, g);
    std::vector<int> atoms(64);
    std::iota(atoms.begin(), atoms.end(), b.design.atom_count() / 2 - 32);
    const Vec2 pixel{3.0, 15.0};

    ReflectorDesign matched = b.design;
    const double k = kTwoPi / matched.wavelength;
    for (int m : atoms)
    {
        const double grad = std::sin(th) - std::sin(reflection_angle_to_target(th, pixel, g));
        matched.meta_atom_phases[m] = k * matched.atom_positions[m] * grad;
    }
    const double exact = std::abs(reflection_gain(matched, atoms, th, pixel, g));
    CHECK(exact / (64.0 * 64.0) > 0.98);

    std::mt19937_64 eng(3);
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    double mean = 0.0;
    const int draws = 1000;
    ReflectorDesign rnd = b.design;
    for (int d = 0; d < draws; ++d)
    {
        for (int m : atoms)
            rnd.meta_atom_phases[m] = u(eng);
        mean += std::abs(reflection_gain(rnd, atoms, th, pixel, g));
    }
    mean /= draws;
    CHECK(mean == Approx(64.0).epsilon(0.1));
}

TEST_CASE("factorized gain matches the double sum", "[reflector][oracle]")
{
    OracleConfig cfg;
    cfg.cases = 10;
    const OracleReport r = run_oracle(OracleKind::GainBruteforce, cfg);
    CHECK(r.passed);
    for (const auto &row : r.rows)
        CHECK(row.error < 1e-10);
}

TEST_CASE("module pattern", "[reflector]")
{
    const Built b = build(DesignKind::ModularLinear);
    const int n = 7;
    const double to = b.design.module_reflection_angles[n];
    CHECK(module_pattern(b.design, n, to) == Approx(1.0));
    const double rho = b.design.wavelength / (2.0 * b.design.module_length * std::cos(to));
    CHECK(std::abs(module_pattern(b.design, n, std::asin(std::sin(to) + rho))) < 1e-9);

    const Built coarse = build(DesignKind::ModularLinear, 15, 2.4);
    const double w1 = std::asin(std::sin(to) + rho) - to;
    const double to2 = coarse.design.module_reflection_angles[n];
    const double rho2 = coarse.design.wavelength / (2.0 * coarse.design.module_length * std::cos(to2));
    const double w2 = std::asin(std::sin(to2) + rho2) - to2;
    CHECK(w2 == Approx(w1 / 2).epsilon(0.05));
    CHECK_THROWS_AS(module_pattern(b.design, 99, 0.0), Error);
}

TEST_CASE("effective aperture", "[reflector]")
{
    const Built lens = build(DesignKind::Lens);
    const PolarPoint c = PolarPoint::from_cartesian(lens.scenario.geometry.roi.center);
    const EffectiveAperture el = effective_aperture_discrete(lens.design, c);
    CHECK(el.length == Approx(lens.design.length()).epsilon(0.02));

    const Built mirror = build(DesignKind::Mirror);
    const EffectiveAperture em = effective_aperture_discrete(mirror.design, PolarPoint{15.0, 0.4});
    CHECK(em.module_set.empty());

    const Built mod = build(DesignKind::ModularLinear);
    std::mt19937_64 eng(11);
    const Box roi = mod.scenario.geometry.roi;
    std::uniform_real_distribution<double> ux(roi.lower().x, roi.upper().x), uy(roi.lower().y, roi.upper().y);
    for (int i = 0; i < 100; ++i)
    {
        const PolarPoint t = PolarPoint::from_cartesian({ux(eng), uy(eng)});
        const EffectiveAperture d = effective_aperture_discrete(mod.design, t);
        const EffectiveAperture cf = effective_aperture_closed_form(mod.design, t);
        CHECK(std::abs(d.length - cf.length) <= mod.design.module_length + 1e-9);
    }
}

TEST_CASE("single-module aperture limit", "[reflector]")
{
    CHECK(single_module_aperture(0.05, 0.4, 0.08) == Approx(0.4));
    CHECK(single_module_aperture(0.5, 0.4, 0.08) == Approx(0.08));
}
