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

#include "nlosia/geometry.hpp"
#include "nlosia/imaging.hpp"
#include "nlosia/waveform.hpp"

#include <vector>

namespace nlosia
{

// Azimuth values are radians of psi.
struct ResolutionReport
{
    double rho_R_ff = 0.0;
    double rho_R_nf = 0.0;
    double rho_psi_ff = 0.0;
    double rho_psi_nf = 0.0;
    double kappa_R = 0.0;
    double kappa_psi = 0.0;
    double F_plus = 0.0;
    double F_minus = 0.0;
    double a_eff_used = 0.0;
};

ResolutionReport nf_resolution(PolarPoint target, double a_eff, const OfdmConfig &cfg);

// Effective aperture at which the range correction factor equals kappa.
double solve_aperture_for_range_factor(PolarPoint target, double kappa, const OfdmConfig &cfg);

// Wavevectors k(x, f') sampled on an n_x by n_f lattice (x outer, f' inner).
struct SpectralCoverage
{
    PolarPoint target;
    double x_lo = 0.0;
    double x_hi = 0.0;
    double carrier_frequency = 0.0;
    double bandwidth = 0.0;
    int n_x = 0;
    int n_f = 0;
    std::vector<Vec2> wavevectors;

    Vec2 at(int ix, int jf) const { return wavevectors[static_cast<std::size_t>(ix) * n_f + jf]; }
};

SpectralCoverage spectral_coverage(PolarPoint target, double x_lo, double x_hi,
                                   const OfdmConfig &cfg, int n_x = 257, int n_f = 33);

ResolutionReport resolution_from_coverage(const SpectralCoverage &coverage);

// Main-lobe widths of a polar SAF image through its peak (-3.92 dB crossings).
ResolutionReport measured_resolution(const ImageGrid &saf_image);

} // namespace nlosia
