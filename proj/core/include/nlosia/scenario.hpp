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

#include "nlosia/channel.hpp"
#include "nlosia/codebook.hpp"
#include "nlosia/imaging.hpp"
#include "nlosia/reflector.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nlosia
{

inline constexpr int kScenarioSchemaVersion = 1;

enum class CodebookKind
{
    Imaging,
    Standard3gpp,
    Union
};

const char *to_string(CodebookKind kind);

struct ReflectorSpec
{
    DesignKind kind = DesignKind::ModularLinear;
    int modules = 15;
    // Lens focus; defaults to the ROI center.
    std::optional<Vec2> focus;
};

struct CodebookSpec
{
    CodebookKind kind = CodebookKind::Imaging;
    double step_scale = 1.0;
};

struct ImagingSpec
{
    double grid_oversample = 3.0;
    double gain_floor_db = -20.0;
    int range_oversample = 8;
    bool exact_range_sum = false;
    // Focus with each detected target's estimated velocity.
    bool compensate_velocity = false;
    BeamWeighting weighting = BeamWeighting::Inverse;
};

struct VelocitySpec
{
    bool enabled = false;
    int rounds = 1;
    int max_targets = 1;
    double threshold_db = 8.0;
};

struct Scenario
{
    int schema_version = kScenarioSchemaVersion;
    std::string name;
    std::uint64_t seed = 0;
    std::string output_dir;
    SceneGeometry geometry;
    OfdmConfig ofdm;
    BsArray array;
    ReflectorSpec reflector;
    CodebookSpec codebook;
    std::vector<TargetState> targets;
    SynthesisOptions synthesis;
    ImagingSpec imaging;
    VelocitySpec velocity;
    int threads = 1;
};

// Throws Error with the offending line or field path.
Scenario parse_scenario(std::string_view text, const std::string &source = "<scenario>");
Scenario load_scenario(const std::filesystem::path &path);

// Fully expanded form; parse_scenario(dump_scenario(s)) == s bit for bit.
std::string dump_scenario(const Scenario &scenario);
// Expanded form plus a provenance record (ignored on re-read).
std::string dump_manifest(const Scenario &scenario, const std::string &source);

// Two lines of targets through center: along x and along y, 17 in total.
std::vector<TargetState> two_line_targets(Vec2 center, double spacing, double rcs, std::uint64_t seed);

Codebook build_codebook(const Scenario &scenario);
ReflectorDesign build_design(const Scenario &scenario, const Codebook &codebook);
SensingSystem build_system(const Scenario &scenario);

} // namespace nlosia
