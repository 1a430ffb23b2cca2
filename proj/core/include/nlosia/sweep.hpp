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

#include "nlosia/scenario.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace nlosia
{

enum class SweepParameter
{
    ReflectorLength,
    ModuleLength,
    RoiSize,
    Carrier,
    Snr
};

enum class SweepMetric
{
    IaOverhead,
    RhoPsi,
    RhoR,
    RmseVR,
    RmseVT,
    Crb,
    PeakSpreadDb
};

const char *to_string(SweepParameter p);
const char *to_string(SweepMetric m);

struct SweepSpec
{
    Scenario base;
    SweepParameter parameter = SweepParameter::ReflectorLength;
    std::vector<double> values;
    std::vector<SweepMetric> metrics;
    int trials = 20;
    // Moving target for the velocity metrics; defaults to the ROI center.
    TargetState target;
    bool target_given = false;
};

// base_dir resolves a relative "scenario" path.
SweepSpec parse_sweep(std::string_view text, const std::filesystem::path &base_dir,
                      const std::string &source = "<sweep>");
SweepSpec load_sweep(const std::filesystem::path &path);

// Scenario at one swept value.
Scenario sweep_point(const Scenario &base, SweepParameter parameter, double value);

struct SweepRow
{
    double value = 0.0;
    std::string metric;
    double result = 0.0;
    std::string reason;
};

std::vector<SweepRow> run_sweep(const SweepSpec &spec, int threads = 1);

// sweep.csv plus a gnuplot block file sweep.dat.
void write_sweep(const std::filesystem::path &out, const SweepSpec &spec, const std::vector<SweepRow> &rows);

} // namespace nlosia
