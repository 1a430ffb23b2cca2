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

struct OfdmConfig
{
    double carrier_frequency = 15e9;
    int subcarrier_count = 3333;
    int numerology = 2;
    double pilot_duration = 71.5e-6;
    double tx_power = 1.0;
    double noise_psd_dbm_hz = -173.0;

    double subcarrier_spacing() const { return 15e3 * std::ldexp(1.0, numerology); }
    double slot_duration() const { return 1e-3 / std::ldexp(1.0, numerology); }
    double bandwidth() const { return subcarrier_count * subcarrier_spacing(); }
    double wavelength() const { return kSpeedOfLight / carrier_frequency; }
    double wavenumber() const { return kTwoPi / wavelength(); }
    // sigma_z^2 = N0 B in watts.
    double noise_variance() const;
    // Subcarrier frequency offset from the carrier, centered on the band.
    int subcarrier_index(int q) const { return q - subcarrier_count / 2; }
    double subcarrier_offset(int q) const { return subcarrier_index(q) * subcarrier_spacing(); }

    void validate() const;

    // Q chosen as round(B / delta_f).
    static OfdmConfig with_bandwidth(double carrier, double bandwidth, int numerology,
                                     double pilot_duration = 71.5e-6, double tx_power = 1.0);
};

struct BsArray
{
    int element_count = 40;
    double element_spacing = 0.01;

    double aperture() const { return element_count * element_spacing; }
    // Beamwidth at steering angle theta: lambda / (A_bs cos theta).
    double beamwidth(double theta, double wavelength) const;
    void validate() const;

    // Half-wavelength array with K = round(aperture / (lambda/2)).
    static BsArray for_aperture(double aperture, double wavelength);
};

} // namespace nlosia
