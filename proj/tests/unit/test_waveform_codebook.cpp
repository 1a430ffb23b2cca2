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
#include "nlosia/oracle.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

using namespace nlosia;
using Catch::Approx;

namespace
{

SceneGeometry reference_geometry(double length = 1.2)
{
    return reference_scenario(length).geometry;
}

} // namespace

TEST_CASE("OFDM numerology", "[waveform]")
{
    const OfdmConfig c = OfdmConfig::with_bandwidth(15e9, 200e6, 2);
    CHECK(c.subcarrier_spacing() == Approx(60e3));
    CHECK(c.slot_duration() == Approx(0.25e-3));
    CHECK(c.bandwidth() == Approx(200e6).epsilon(1e-3));
    CHECK(c.wavelength() == Approx(0.019986).epsilon(1e-4));
    OfdmConfig bad = c;
    bad.carrier_frequency = 15.0;
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("3GPP codebook is a uniform grid in the sector", "[codebook]")
{
    BsArray k40{40, 0.01};
    const Codebook cb = make_3gpp_codebook(k40);
    REQUIRE(cb.size() == 40);
    const auto a = cb.angles();
    for (std::size_t i = 1; i < a.size(); ++i)
        CHECK(rad2deg(a[i] - a[i - 1]) == Approx(3.0));
    for (double t : a)
        CHECK(std::abs(t) <= deg2rad(60.0) + 1e-12);
    const Codebook two = make_3gpp_codebook(BsArray{2, 0.01});
    REQUIRE(two.size() == 2);
    CHECK(rad2deg(two.angles()[1] - two.angles()[0]) == Approx(60.0));
}

TEST_CASE("phase rate versus transmit angle", "[codebook]")
{
    const SceneGeometry g = reference_geometry();
    const OfdmConfig cfg = reference_scenario().ofdm;
    const double th = deg2rad(20.0);
    const double x = incidence_point(th, g);
    const Vec2 specular{x + 10.0 * std::sin(th), 10.0 * std::cos(th)};
    CHECK(phase_rate_vs_txangle(th, specular, g, cfg) == Approx(0.0).margin(1e-6 * cfg.wavenumber()));

    const Vec2 pixel{0.0, 15.0};
    const AngularInterval span = reflector_incidence_span(g);
    double prev = -1e300;
    for (int i = 0; i <= 20; ++i)
    {
        const double t = span.lo + span.span() * i / 20.0;
        const double r = phase_rate_vs_txangle(t, pixel, g, cfg);
        CHECK(r > prev);
        prev = r;
    }
    const double h = 1e-6;
    const auto phase = [&](double t) {
        return 2.0 * cfg.wavenumber() * (incidence_distance(incidence_point(t, g), g) +
                                   (pixel - Vec2{incidence_point(t, g), 0.0}).norm());
    };
    const double fd = (phase(th + h) - phase(th - h)) / (2.0 * h);
    CHECK(phase_rate_vs_txangle(th, pixel, g, cfg) == Approx(fd).epsilon(1e-3));
}

TEST_CASE("imaging sampling bound", "[codebook]")
{
    const Scenario s = reference_scenario();
    const AngularInterval span = reflector_incidence_span(s.geometry);
    const double full = imaging_sampling_bound(s.geometry, s.geometry.roi, span, s.ofdm);
    Box point = s.geometry.roi;
    point.size = {1e-3, 1e-3};
    CHECK(imaging_sampling_bound(s.geometry, point, span, s.ofdm) > full);

    // Doubling the reflector more than halves the step only when the ROI is small.
    Scenario big = reference_scenario(2.4);
    CHECK(imaging_sampling_bound(big.geometry, big.geometry.roi, reflector_incidence_span(big.geometry), big.ofdm) <
          full);
    Scenario small = reference_scenario(1.2);
    small.geometry.roi.size = {0.05, 0.05};
    big.geometry.roi.size = small.geometry.roi.size;
    const double d1 =
        imaging_sampling_bound(small.geometry, small.geometry.roi, reflector_incidence_span(small.geometry), small.ofdm);
    const double d2 =
        imaging_sampling_bound(big.geometry, big.geometry.roi, reflector_incidence_span(big.geometry), big.ofdm);
    CHECK(d2 < 0.5 * d1);
}

TEST_CASE("imaging codebook covers the reflector", "[codebook]")
{
    const Scenario s = reference_scenario();
    const Codebook cb = make_imaging_codebook(s.geometry, s.ofdm);
    CHECK(cb.size() == make_imaging_codebook(s.geometry, s.ofdm).size());
    CHECK(cb.size() > 100);
    std::vector<Footprint> fps;
    for (double t : cb.angles())
        fps.push_back(beam_footprint(t, s.array, s.geometry, s.ofdm.wavelength()));
    for (int i = 0; i <= 200; ++i)
    {
        const double x = -0.6 + 1.2 * i / 200.0;
        const bool covered = std::any_of(fps.begin(), fps.end(), [&](const Footprint &f) {
            return !f.misses_reflector && x >= f.lo - 1e-9 && x <= f.hi + 1e-9;
        });
        CHECK(covered);
    }
    Scenario tiny = reference_scenario(1e-3);
    CHECK(make_imaging_codebook(tiny.geometry, tiny.ofdm).size() == 1);
}

TEST_CASE("initial-access durations", "[codebook]")
{
    const Scenario s = reference_scenario();
    const Codebook cb = make_imaging_codebook(s.geometry, s.ofdm);
    const IaDurations d = ia_durations(s.array, cb, s.ofdm);
    CHECK(s.array.element_count == 40);
    CHECK(d.standard == Approx(10e-3));
    CHECK(d.overhead > 1.0);
    CHECK(ia_durations(s.array, Codebook{}, s.ofdm).overhead <= 1.0);

    const Scenario fr2 = reference_scenario(1.2, 28e9);
    Scenario fr2_same = fr2;
    fr2_same.array = BsArray::for_aperture(s.array.aperture(), fr2.ofdm.wavelength());
    const IaDurations d28 =
        ia_durations(fr2_same.array, make_imaging_codebook(fr2.geometry, fr2.ofdm), fr2.ofdm);
    CHECK(d.overhead > d28.overhead);
}

TEST_CASE("beam footprint on the reflector", "[codebook]")
{
    SceneGeometry g;
    g.bs_position = {0.0, 5.0};
    g.reflector_half_length = 5.0;
    g.roi = {{0.0, 15.0}, {5.0, 5.0}};
    const BsArray a = BsArray::for_aperture(0.4, 0.02);
    const Footprint f = beam_footprint(deg2rad(20.0), a, g, 0.02);
    CHECK(f.nominal_length == Approx(0.828).epsilon(0.01));
    const Footprint wide = beam_footprint(deg2rad(20.0), BsArray::for_aperture(0.8, 0.02), g, 0.02);
    CHECK(wide.nominal_length < f.nominal_length);
    g.reflector_half_length = 0.2;
    const Footprint clipped = beam_footprint(deg2rad(2.0), a, g, 0.02);
    CHECK(clipped.length() <= g.reflector_length() + 1e-12);
}
