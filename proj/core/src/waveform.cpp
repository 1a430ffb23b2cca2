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

#include "nlosia/waveform.hpp"

#include <algorithm>

namespace nlosia
{

double OfdmConfig::noise_variance() const
{
    const double n0_w_per_hz = std::pow(10.0, (noise_psd_dbm_hz - 30.0) / 10.0);
    return n0_w_per_hz * bandwidth();
}

void OfdmConfig::validate() const
{
    if (!(carrier_frequency > 0.0))
        throw Error("ofdm: carrier frequency must be positive");
    if (subcarrier_count < 1)
        throw Error("ofdm: subcarrier count must be at least 1");
    if (!(carrier_frequency > bandwidth()))
        throw Error("ofdm: carrier frequency must exceed the occupied bandwidth");
    if (numerology < 0 || numerology > 6)
        throw Error("ofdm: numerology must lie in 0..6");
    if (!(pilot_duration > 0.0 && pilot_duration < slot_duration()))
        throw Error("ofdm: pilot duration must be positive and below the slot duration");
    if (!(tx_power > 0.0))
        throw Error("ofdm: tx power must be positive");
}

OfdmConfig OfdmConfig::with_bandwidth(double carrier, double bandwidth, int numerology,
                                      double pilot_duration, double tx_power)
{
    OfdmConfig c;
    c.carrier_frequency = carrier;
    c.numerology = numerology;
    c.pilot_duration = pilot_duration;
    c.tx_power = tx_power;
    c.subcarrier_count = std::max(1, static_cast<int>(std::lround(bandwidth / c.subcarrier_spacing())));
    return c;
}

double BsArray::beamwidth(double theta, double wavelength) const
{
    return wavelength / (aperture() * std::cos(theta));
}

void BsArray::validate() const
{
    if (element_count < 2)
        throw Error("array: element count must be at least 2");
    if (!(element_spacing > 0.0))
        throw Error("array: element spacing must be positive");
}

BsArray BsArray::for_aperture(double aperture, double wavelength)
{
    BsArray a;
    a.element_spacing = wavelength / 2;
    a.element_count = std::max(2, static_cast<int>(std::lround(aperture / a.element_spacing)));
    return a;
}

} // namespace nlosia
