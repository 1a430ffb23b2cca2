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
#include "nlosia/channel.hpp"
#include "nlosia/oracle.hpp"

#include <catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <filesystem>

using namespace nlosia;
using Catch::Approx;

TEST_CASE("path-loss amplitude scaling", "[channel]")
{
    const OfdmConfig cfg;
    const BsArray k40{40, 0.01}, k80{80, 0.01};
    const double b = beta(5.3, 15.0, cfg, k40);
    CHECK(beta(5.3, 30.0, cfg, k40) == Approx(b / 4));
    CHECK(beta(5.3, 15.0, cfg, k80) == Approx(4 * b));
}

TEST_CASE("per-beam SNR", "[channel]")
{
    const OfdmConfig cfg;
    const BsArray a{40, 0.01};
    CHECK(std::isinf(to_db10(snr_per_beam(100.0, 0.0, 5.3, 15.0, cfg, a))));
    const double s1 = to_db10(snr_per_beam(100.0, 0.5, 5.3, 15.0, cfg, a));
    const double s2 = to_db10(snr_per_beam(100.0, 1.0, 5.3, 15.0, cfg, a));
    CHECK(s2 - s1 == Approx(3.0103).epsilon(1e-4));

    // A 1 m^2 target at the ROI centre of the reference scenario.
    const Scenario s = reference_scenario();
    const SensingSystem sys = build_system(s);
    TargetState t;
    t.position = PolarPoint::from_cartesian(s.geometry.roi.center);
    t.rcs = 1.0;
    const LinkBudget lb = link_budget(sys, t);
    CHECK(lb.snr_per_beam_db >= 18.0);
    CHECK(lb.snr_per_beam_db <= 21.0);
    CHECK(lb.coherent_snr_db > lb.snr_per_beam_db);
}

TEST_CASE("Doppler models", "[channel]")
{
    TargetState t;
    t.position = {15.0, 0.0};
    t.velocity_radial = 1.0;
    for (double x : {-0.5, 0.0, 0.5})
        CHECK(doppler_first_order(t, x, 0.02) == Approx(-100.0));
    t.velocity_radial = 0.0;
    t.velocity_transverse = 2.0;
    const double slope = (doppler_first_order(t, 0.3, 0.02) - doppler_first_order(t, -0.3, 0.02)) / 0.6;
    CHECK(slope == Approx(-2.0 * 2.0 / (0.02 * 15.0)));
    t.velocity_radial = 0.7;
    t.position = {15.0, 0.2};
    for (double x : {0.05, 0.1, 0.2})
    {
        const double exact = doppler_exact(t.velocity_xy(), t.position_xy(), x, 0.02);
        const double err = std::abs(exact - doppler_first_order(t, x, 0.02));
        CHECK(err <= 4.0 / 0.02 * (x / 15.0) * (x / 15.0) * 3.0);
    }
}

TEST_CASE("pilot blocks are unit-modulus and reproducible", "[channel]")
{
    const auto a = pilot_block(9, 3, 256);
    const auto b = pilot_block(9, 3, 256);
    const auto c = pilot_block(9, 4, 256);
    CHECK(a == b);
    CHECK(a != c);
    for (const Complex &s : a)
        CHECK(std::abs(s) == Approx(1.0));
}

TEST_CASE("echo synthesis", "[channel]")
{
    Scenario s = reference_scenario(0.6);
    const SensingSystem sys = build_system(s);

    SECTION("empty scene is white noise of the configured power")
    {
        const EchoTensor e = synthesize(sys, {}, 4);
        double p = 0.0;
        for (const Complex &v : e.samples)
            p += std::norm(v);
        p /= static_cast<double>(e.samples.size());
        CHECK(p == Approx(e.noise_power).epsilon(0.05));
    }
    SECTION("static target without noise has flat magnitude over subcarriers")
    {
        TargetState t;
        t.position = {15.0, 0.0};
        const std::array<TargetState, 1> scene{t};
        SynthesisOptions o;
        o.noise = false;
        const EchoTensor e = synthesize(sys, scene, 4, o);
        int checked = 0;
        for (int b = 0; b < e.beam_count; ++b)
        {
            const double m0 = std::abs(e.at(0, b));
            if (m0 == 0.0)
                continue;
            ++checked;
            for (int q = 1; q < e.subcarrier_count; q += 97)
                CHECK(std::abs(e.at(q, b)) == Approx(m0).epsilon(1e-9));
        }
        CHECK(checked > 0);
    }
    SECTION("binary tensor round trip")
    {
        const EchoTensor e = synthesize(sys, {}, 5);
        const auto path = std::filesystem::temp_directory_path() / "nlosia_echo_roundtrip.bin";
        write_echo_tensor(path, e);
        const EchoTensor r = read_echo_tensor(path);
        CHECK(r.beam_count == e.beam_count);
        CHECK(r.subcarrier_count == e.subcarrier_count);
        CHECK(r.seed == e.seed);
        CHECK(r.samples == e.samples);
        std::filesystem::remove(path);
    }
    SECTION("same seed, same tensor")
    {
        CHECK(synthesize(sys, {}, 6).samples == synthesize(sys, {}, 6).samples);
    }
}
