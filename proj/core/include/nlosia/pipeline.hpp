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
#include "nlosia/scenario.hpp"
#include "nlosia/velocity.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nlosia
{

struct RunOverrides
{
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<double> grid_oversample;
};

Scenario apply_overrides(Scenario scenario, const RunOverrides &overrides);

BackprojectOptions backproject_options(const Scenario &scenario);

// Effective aperture toward the ROI center for the system's design.
double roi_effective_aperture(const SensingSystem &system);

// Polar grid over the ROI at the finest attainable resolution divided by the oversampling.
GridSpec scenario_grid(const Scenario &scenario);

struct TargetReport
{
    int id = 0;
    PolarPoint truth;
    // Largest magnitude within one grid cell of the truth, relative to the image maximum.
    double amplitude_db = 0.0;
    bool detected = false;
};

// Detection threshold relative to the image maximum.
inline constexpr double kTargetDetectionDb = -20.0;

std::vector<TargetReport> assess_targets(const ImageGrid &image, std::span<const TargetState> targets);

// Peak-amplitude spread among the targets in dB (max minus min).
double amplitude_spread_db(std::span<const TargetReport> reports);

struct VelocityReport
{
    int id = 0;
    CoarseDetection detection;
    VelocityEstimate estimate;
    bool diverged = false;
    // Non-empty when estimation failed for this detection.
    std::string error;
};

std::vector<VelocityReport> estimate_scene_velocities(const Scenario &scenario, const BackProjector &projector,
                                                      const GridSpec &grid);

using Metrics = std::vector<std::pair<std::string, double>>;

// Stage entry points; each writes its artifacts into out.
void stage_design(const Scenario &scenario, const SensingSystem &system, const std::filesystem::path &out);
EchoTensor stage_simulate(const Scenario &scenario, const SensingSystem &system, const std::filesystem::path &out);
ImageGrid stage_image(const Scenario &scenario, const SensingSystem &system, const EchoTensor &echoes,
                      const std::filesystem::path &out, Vec2 hypothesis = {});
std::vector<VelocityReport> stage_velocity(const Scenario &scenario, const SensingSystem &system,
                                           const EchoTensor &echoes, const std::filesystem::path &out);

// Loads echoes.bin from out when present and matching, otherwise synthesizes them.
EchoTensor load_or_simulate(const Scenario &scenario, const SensingSystem &system, const std::filesystem::path &out);

// Full pipeline with manifest and metrics.csv; returns the metrics rows.
Metrics run_scenario(const Scenario &scenario, const std::filesystem::path &out, const std::string &source);

void write_metrics_csv(const std::filesystem::path &path, const Metrics &metrics);

} // namespace nlosia
