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

#include "nlosia/resolution.hpp"
#include "nlosia/scenario.hpp"
#include "nlosia/velocity.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace nlosia
{

enum class OracleKind
{
    CoverageVsClosedForm,
    SafVsClosedForm,
    GainBruteforce,
    CrbMonteCarlo
};

const char *to_string(OracleKind kind);
OracleKind parse_oracle_kind(const std::string &name);

struct OracleConfig
{
    std::uint64_t seed = 1;
    int cases = 50;
    int trials = 500;
    double snr_db = 20.0;
    int threads = 1;
};

struct OracleRow
{
    std::string label;
    double expected = 0.0;
    double measured = 0.0;
    double error = 0.0;
    bool pass = false;
};

struct OracleReport
{
    OracleKind kind = OracleKind::CoverageVsClosedForm;
    double tolerance = 0.0;
    std::vector<OracleRow> rows;
    bool passed = false;
};

OracleReport run_oracle(OracleKind kind, const OracleConfig &config);
void write_oracle_csv(const std::filesystem::path &path, const OracleReport &report);

// Narrow-beam lens scenario focused on target whose reflector length equals a_eff.
Scenario resolution_scenario(PolarPoint target, double a_eff, const OfdmConfig &cfg);

struct ThreeWayResolution
{
    PolarPoint target;
    double a_eff = 0.0;
    ResolutionReport closed_form;
    ResolutionReport coverage;
    ResolutionReport measured;
};

// Deterministic (target, A_eff) combinations spanning near to far field.
std::vector<std::pair<PolarPoint, double>> resolution_case_grid();

// Carrier and bandwidth used by the resolution cases.
OfdmConfig resolution_ofdm();

ThreeWayResolution three_way_resolution(PolarPoint target, double a_eff, const OfdmConfig &cfg, int threads = 1);

// Velocity Monte-Carlo on full echo synthesis with the anchor at the true position.
// Coefficient variances when fitting a centered sub-run of the effective track.
struct SubRunStatistics
{
    int length = 0;
    double var_a1 = 0.0;
    double var_a2 = 0.0;
};

struct VelocityMonteCarlo
{
    int trials = 0;
    int effective_samples = 0;
    double per_sample_snr_db = 0.0;
    double rmse_v_radial = 0.0;
    double rmse_v_transverse = 0.0;
    double crb_v_radial = 0.0;
    double crb_v_transverse = 0.0;
    double bias_v_radial = 0.0;
    double bias_v_transverse = 0.0;
    // Sample variances of the phase-polynomial coefficients.
    double var_a1 = 0.0;
    double var_a2 = 0.0;
    std::vector<SubRunStatistics> sub_runs;
    int failures = 0;
};

// Sub-runs longer than the effective track are skipped.
VelocityMonteCarlo velocity_monte_carlo(const Scenario &scenario, const TargetState &target, int trials,
                                        std::uint64_t seed, int threads = 1,
                                        std::span<const int> sub_run_lengths = {});

// Reference geometry for velocity studies: A_bs = 0.4 m, D_y = 5 m, 20 deg incidence, ROI at 15 m.
Scenario reference_scenario(double reflector_length = 1.2, double carrier = 15e9);

// Scales tx power so the mean per-beam SNR over the effective beams of target reaches snr_db.
Scenario with_per_beam_snr(Scenario scenario, const TargetState &target, double snr_db);

} // namespace nlosia
