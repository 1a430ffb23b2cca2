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

#include "nlosia/imaging.hpp"
#include "nlosia/reflector.hpp"

#include <span>
#include <vector>

namespace nlosia
{

struct Matrix2
{
    double xx = 0.0;
    double xy = 0.0;
    double yx = 0.0;
    double yy = 0.0;
};

struct CoarseOptions
{
    double detection_threshold_db = 8.0;
    std::size_t max_targets = 1;
};

struct CoarseDetection
{
    PolarPoint position;
    double level_db = 0.0;
};

// Incoherent combination of single-beam images weighted by predicted illumination.
// Strongest local maxima above threshold; throws when none is detectable.
std::vector<CoarseDetection> coarse_positions(const SingleBeamStack &stack,
                                              const CoarseOptions &options = {});
PolarPoint coarse_position(const SingleBeamStack &stack, const CoarseOptions &options = {});

// Phases are propagation phases, the negated argument of I_l(anchor).
struct PhaseTrack
{
    std::vector<int> beam_indices;
    std::vector<double> unwrapped_phase;
    std::vector<double> weights;
    std::vector<bool> effective_mask;
    bool unwrap_failure = false;
};

// samples and slots run over beams; weights are 1 / (2 snr).
PhaseTrack extract_phase_track(std::span<const Complex> samples, std::span<const int> slots,
                               std::span<const double> snr_per_beam,
                               std::span<const bool> effective_mask);

struct VelocityEstimate
{
    double v_radial = 0.0;
    double v_transverse = 0.0;
    double a0 = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
    Matrix2 covariance;
    Matrix2 crb;
    PolarPoint anchor;
    double residual = 0.0;
    int samples = 0;
    bool unwrap_failure = false;
};

VelocityEstimate fit_velocity(const PhaseTrack &track, PolarPoint anchor, double v_sweep,
                              const OfdmConfig &cfg);

// Track extraction at an anchor with SNR weights from the data.
PhaseTrack track_at(const BackProjector &projector, PolarPoint anchor);

// coarse_position -> extract -> fit on one echo tensor.
VelocityEstimate estimate_velocity(const BackProjector &projector, PolarPoint anchor);

struct RefineResult
{
    VelocityEstimate estimate;
    std::vector<VelocityEstimate> history;
    bool diverged = false;
};

// Round 1 is the initial estimate; later rounds re-anchor on the Doppler-corrected image.
RefineResult iterate_refine(const BackProjector &projector, const VelocityEstimate &initial,
                            int rounds);

} // namespace nlosia
