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
#include "nlosia/resolution.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace nlosia;
using Catch::Approx;

namespace
{

OfdmConfig band(double f0, double b) { return OfdmConfig::with_bandwidth(f0, b, 3); }

} // namespace

TEST_CASE("range-factor anchor", "[resolution]")
{
    const OfdmConfig cfg = band(10e9, 30e6);
    const PolarPoint t{10.0, 0.0};
    CHECK(nf_resolution(t, 5.01, cfg).kappa_R == Approx(10.0).epsilon(0.02));
    CHECK(solve_aperture_for_range_factor(t, 10.0, cfg) == Approx(5.0).epsilon(0.02));
}

TEST_CASE("far-field limits", "[resolution]")
{
    const OfdmConfig cfg = band(15e9, 200e6);
    const ResolutionReport r = nf_resolution({1500.0, 0.2}, 1.0, cfg);
    CHECK(r.kappa_R < 0.01);
    CHECK(r.rho_psi_nf == Approx(cfg.wavelength() / (2.0 * 1.0 * std::cos(0.2))).epsilon(0.01));
}

TEST_CASE("SSB bandwidth anchors", "[resolution]")
{
    CHECK(kSpeedOfLight / (2.0 * 3.6e6) == Approx(41.6).epsilon(5e-3));
    CHECK(kSpeedOfLight / (2.0 * 57e6) == Approx(2.63).epsilon(5e-3));
    CHECK(nf_resolution({10.0, 0.0}, 0.01, OfdmConfig::with_bandwidth(10e9, 57e6, 2)).rho_R_ff ==
          Approx(kSpeedOfLight / (2.0 * OfdmConfig::with_bandwidth(10e9, 57e6, 2).bandwidth())));
}

TEST_CASE("spectral coverage geometry", "[resolution]")
{
    const OfdmConfig cfg = band(15e9, 200e6);
    const SpectralCoverage one = spectral_coverage({15.0, 0.0}, 0.0, 0.0, cfg, 1, 1);
    REQUIRE(one.wavevectors.size() == 1);
    CHECK(one.wavevectors[0].norm() == Approx(4.0 * kPi * cfg.carrier_frequency / kSpeedOfLight));

    const SpectralCoverage sym = spectral_coverage({15.0, 0.0}, -0.5, 0.5, cfg, 33, 5);
    for (int i = 0; i < sym.n_x; ++i)
        for (int j = 0; j < sym.n_f; ++j)
        {
            const Vec2 a = sym.at(i, j), b = sym.at(sym.n_x - 1 - i, j);
            CHECK(a.x == Approx(-b.x).margin(1e-9));
            CHECK(a.y == Approx(b.y));
        }

    SpectralCoverage narrow = spectral_coverage({1e4, 0.0}, -0.5, 0.5, cfg, 33, 1);
    narrow.bandwidth = 0.0;
    const ResolutionReport rr = resolution_from_coverage(narrow);
    CHECK((rr.rho_R_nf > 1e3 || std::isinf(rr.rho_R_nf)));
}

TEST_CASE("measured widths of a planted sinc image", "[resolution]")
{
    const double rho_r = 0.75, rho_psi = 0.02;
    ImageGrid img;
    img.grid = GridSpec::polar(15.0, 3.0, 0.01, 0.0, 0.08, 0.0005);
    img.values.resize(img.grid.size());
    for (int i = 0; i < img.grid.axis1.count; ++i)
        for (int j = 0; j < img.grid.axis2.count; ++j)
            img.values[img.grid.index(i, j)] =
                sinc((img.grid.axis1.at(i) - 15.0) / rho_r) * sinc(img.grid.axis2.at(j) / rho_psi);
    const ResolutionReport m = measured_resolution(img);
    CHECK(m.rho_R_nf == Approx(rho_r).margin(0.01));
    CHECK(m.rho_psi_nf == Approx(rho_psi).margin(0.0005));
}
