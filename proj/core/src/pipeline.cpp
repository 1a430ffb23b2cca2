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

#include "nlosia/pipeline.hpp"

#include "nlosia/csv.hpp"
#include "nlosia/resolution.hpp"

#include <algorithm>
#include <fstream>
#include <limits>

namespace nlosia
{

namespace
{

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

} // namespace

double roi_effective_aperture(const SensingSystem &system)
{
    const PolarPoint c = PolarPoint::from_cartesian(system.geometry().roi.center);
    const auto &d = system.design();
    switch (d.kind)
    {
    case DesignKind::Lens:
        return d.length();
    case DesignKind::ModularLinear:
        return effective_aperture_closed_form(d, c).length;
    case DesignKind::Mirror:
        return effective_aperture_discrete(d, c).length;
    }
    return d.length();
}

Scenario apply_overrides(Scenario scenario, const RunOverrides &overrides)
{
    if (overrides.seed)
        scenario.seed = *overrides.seed;
    if (overrides.threads)
    {
        if (*overrides.threads < 1)
            throw Error("threads: must be at least 1");
        scenario.threads = *overrides.threads;
    }
    if (overrides.grid_oversample)
    {
        if (!(*overrides.grid_oversample >= 0.25 && *overrides.grid_oversample <= 50.0))
            throw Error("grid-oversample: outside the sane range [0.25, 50]");
        scenario.imaging.grid_oversample = *overrides.grid_oversample;
    }
    return scenario;
}

BackprojectOptions backproject_options(const Scenario &scenario)
{
    BackprojectOptions o;
    o.gain_floor_db = scenario.imaging.gain_floor_db;
    o.range_oversample = scenario.imaging.range_oversample;
    o.exact_range_sum = scenario.imaging.exact_range_sum;
    o.weighting = scenario.imaging.weighting;
    o.threads = scenario.threads;
    return o;
}

GridSpec scenario_grid(const Scenario &scenario)
{
    const auto &g = scenario.geometry;
    const double rho_r = kSpeedOfLight / (2.0 * scenario.ofdm.bandwidth());
    const double psi_c = std::atan2(g.roi.center.x, g.roi.center.y);
    const double rho_psi = scenario.ofdm.wavelength() / (2.0 * g.reflector_length() * std::cos(psi_c));
    const double ovs = scenario.imaging.grid_oversample;
    return roi_polar_grid(g, rho_r / ovs, rho_psi / ovs);
}

std::vector<TargetReport> assess_targets(const ImageGrid &image, std::span<const TargetState> targets)
{
    const auto &g = image.grid;
    double peak = 0.0;
    for (const Complex &v : image.values)
        peak = std::max(peak, std::abs(v));
    std::vector<TargetReport> out;
    for (std::size_t u = 0; u < targets.size(); ++u)
    {
        TargetReport r;
        r.id = static_cast<int>(u);
        r.truth = targets[u].position;
        const int i0 = static_cast<int>(std::lround((r.truth.radius - g.axis1.start) / g.axis1.step));
        const int j0 = static_cast<int>(std::lround((r.truth.angle - g.axis2.start) / g.axis2.step));
        double best = 0.0;
        for (int i = i0 - 1; i <= i0 + 1; ++i)
            for (int j = j0 - 1; j <= j0 + 1; ++j)
                if (i >= 0 && j >= 0 && i < g.axis1.count && j < g.axis2.count)
                    best = std::max(best, image.magnitude(i, j));
        r.amplitude_db = peak > 0.0 && best > 0.0 ? to_db20(best / peak) : -std::numeric_limits<double>::infinity();
        r.detected = r.amplitude_db >= kTargetDetectionDb;
        out.push_back(r);
    }
    return out;
}

double amplitude_spread_db(std::span<const TargetReport> reports)
{
    if (reports.empty())
        return kNaN;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto &r : reports)
    {
        lo = std::min(lo, r.amplitude_db);
        hi = std::max(hi, r.amplitude_db);
    }
    return hi - lo;
}

std::vector<VelocityReport> estimate_scene_velocities(const Scenario &scenario, const BackProjector &projector,
                                                      const GridSpec &grid)
{
    CoarseOptions co;
    co.detection_threshold_db = scenario.velocity.threshold_db;
    co.max_targets = static_cast<std::size_t>(scenario.velocity.max_targets);
    const auto detections = coarse_positions(projector.single_beam_images(grid), co);
    std::vector<VelocityReport> out;
    for (std::size_t u = 0; u < detections.size(); ++u)
    {
        VelocityReport r;
        r.id = static_cast<int>(u);
        r.detection = detections[u];
        try
        {
            r.estimate = estimate_velocity(projector, detections[u].position);
            if (scenario.velocity.rounds > 1)
            {
                const RefineResult rr = iterate_refine(projector, r.estimate, scenario.velocity.rounds);
                r.estimate = rr.estimate;
                r.diverged = rr.diverged;
            }
        }
        catch (const Error &e)
        {
            r.error = e.what();
            r.estimate.anchor = detections[u].position;
            r.estimate.v_radial = r.estimate.v_transverse = kNaN;
        }
        out.push_back(r);
    }
    return out;
}

void stage_design(const Scenario &, const SensingSystem &system, const std::filesystem::path &out)
{
    std::filesystem::create_directories(out);
    {
        std::ofstream os(out / "design.csv");
        if (!os)
            throw Error("design: cannot write " + (out / "design.csv").string());
        write_design_csv(os, system.design());
    }
    std::ofstream os(out / "codebook.csv");
    if (!os)
        throw Error("design: cannot write " + (out / "codebook.csv").string());
    write_codebook_csv(os, system.codebook());
}

EchoTensor stage_simulate(const Scenario &scenario, const SensingSystem &system, const std::filesystem::path &out)
{
    std::filesystem::create_directories(out);
    EchoTensor e = synthesize(system, scenario.targets, scenario.seed, scenario.synthesis);
    write_echo_tensor(out / "echoes.bin", e);
    write_beam_sidecar_csv(out / "beams.csv", e);
    return e;
}

EchoTensor load_or_simulate(const Scenario &scenario, const SensingSystem &system, const std::filesystem::path &out)
{
    const auto path = out / "echoes.bin";
    if (std::filesystem::exists(path))
    {
        EchoTensor e = read_echo_tensor(path);
        if (e.seed == scenario.seed && e.subcarrier_count == system.ofdm().subcarrier_count &&
            e.beam_count == system.beam_count() && e.carrier_frequency == system.ofdm().carrier_frequency)
        {
            e.per_beam = read_beam_sidecar_csv(out / "beams.csv");
            return e;
        }
    }
    return synthesize(system, scenario.targets, scenario.seed, scenario.synthesis);
}

ImageGrid stage_image(const Scenario &scenario, const SensingSystem &system, const EchoTensor &echoes,
                      const std::filesystem::path &out, Vec2 hypothesis)
{
    std::filesystem::create_directories(out);
    const BackProjector bp(system, echoes, backproject_options(scenario));
    ImageGrid img = bp.image(scenario_grid(scenario), hypothesis);
    write_image_csv(out / "image.csv", img);
    write_image_matrix(out / "image.dat", img);
    write_image_binary(out / "image.bin", img);
    CsvWriter w(out / "targets.csv", {"target", "radius_m", "angle_rad", "amplitude_db", "detected"});
    for (const auto &r : assess_targets(img, scenario.targets))
    {
        w.cell(r.id).cell(r.truth.radius).cell(r.truth.angle).cell(r.amplitude_db).cell(r.detected ? 1 : 0);
        w.end_row();
    }
    return img;
}

std::vector<VelocityReport> stage_velocity(const Scenario &scenario, const SensingSystem &system,
                                           const EchoTensor &echoes, const std::filesystem::path &out)
{
    std::filesystem::create_directories(out);
    const BackProjector bp(system, echoes, backproject_options(scenario));
    const auto reports = estimate_scene_velocities(scenario, bp, scenario_grid(scenario));
    CsvWriter w(out / "velocity.csv",
                {"target", "radius_m", "angle_rad", "v_radial_mps", "v_transverse_mps", "std_v_radial", "crb_v_radial",
                 "std_v_transverse", "crb_v_transverse", "samples", "diverged", "unwrap_failure", "error"});
    for (const auto &r : reports)
    {
        const auto &e = r.estimate;
        w.cell(r.id).cell(e.anchor.radius).cell(e.anchor.angle).cell(e.v_radial).cell(e.v_transverse);
        w.cell(std::sqrt(e.covariance.xx)).cell(std::sqrt(e.crb.xx));
        w.cell(std::sqrt(e.covariance.yy)).cell(std::sqrt(e.crb.yy));
        w.cell(e.samples).cell(r.diverged ? 1 : 0).cell(e.unwrap_failure ? 1 : 0);
        std::string msg = r.error;
        std::replace_if(msg.begin(), msg.end(), [](char c) { return c == ',' || c == '"' || c == '\n'; }, ';');
        w.cell(msg);
        w.end_row();
    }
    return reports;
}

void write_metrics_csv(const std::filesystem::path &path, const Metrics &metrics)
{
    CsvWriter w(path, {"metric", "value"});
    for (const auto &[k, v] : metrics)
    {
        w.cell(k).cell(v);
        w.end_row();
    }
}

Metrics run_scenario(const Scenario &scenario, const std::filesystem::path &out, const std::string &source)
{
    std::filesystem::create_directories(out);
    {
        std::ofstream os(out / "manifest.json");
        if (!os)
            throw Error("run: cannot write manifest in " + out.string());
        os << dump_manifest(scenario, source);
    }
    const SensingSystem system = build_system(scenario);
    stage_design(scenario, system, out);
    const EchoTensor echoes = stage_simulate(scenario, system, out);

    std::vector<VelocityReport> velocities;
    if (scenario.velocity.enabled && !scenario.targets.empty())
        velocities = stage_velocity(scenario, system, echoes, out);
    Vec2 hypothesis{};
    if (scenario.imaging.compensate_velocity && !velocities.empty() && velocities.front().error.empty())
    {
        const auto &e = velocities.front().estimate;
        hypothesis = polar_velocity(e.anchor.angle, e.v_radial, e.v_transverse);
    }
    const ImageGrid img = stage_image(scenario, system, echoes, out, hypothesis);

    const auto imaging_cb = make_imaging_codebook(scenario.geometry, scenario.ofdm, scenario.codebook.step_scale);
    const IaDurations ia = ia_durations(scenario.array, imaging_cb, scenario.ofdm);
    const auto reports = assess_targets(img, scenario.targets);
    const double a_eff = roi_effective_aperture(system);
    const PolarPoint centre = PolarPoint::from_cartesian(scenario.geometry.roi.center);

    Metrics m;
    m.emplace_back("beams", system.beam_count());
    m.emplace_back("imaging_beams", static_cast<double>(imaging_cb.size()));
    m.emplace_back("modules", system.design().module_count);
    m.emplace_back("meta_atoms", system.design().atom_count());
    m.emplace_back("ia_overhead", ia.overhead);
    m.emplace_back("rho_R_ff_m", kSpeedOfLight / (2.0 * scenario.ofdm.bandwidth()));
    m.emplace_back("a_eff_roi_center_m", a_eff);
    if (a_eff > 0.0)
    {
        const ResolutionReport rr = nf_resolution(centre, a_eff, scenario.ofdm);
        m.emplace_back("rho_R_nf_m", rr.rho_R_nf);
        m.emplace_back("rho_psi_nf_rad", rr.rho_psi_nf);
    }
    else
    {
        m.emplace_back("rho_R_nf_m", kNaN);
        m.emplace_back("rho_psi_nf_rad", kNaN);
    }
    m.emplace_back("grid_range_cells", img.grid.axis1.count);
    m.emplace_back("grid_angle_cells", img.grid.axis2.count);
    double peak = 0.0;
    for (const Complex &v : img.values)
        peak = std::max(peak, std::abs(v));
    m.emplace_back("image_peak", peak);
    m.emplace_back("targets", static_cast<double>(scenario.targets.size()));
    m.emplace_back("detected_targets",
                   static_cast<double>(std::count_if(reports.begin(), reports.end(), [](auto &r) { return r.detected; })));
    m.emplace_back("amplitude_spread_db", amplitude_spread_db(reports));
    m.emplace_back("velocity_detections", static_cast<double>(velocities.size()));
    write_metrics_csv(out / "metrics.csv", m);
    return m;
}

} // namespace nlosia
