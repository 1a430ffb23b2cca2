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
// Command-line front end: one subcommand per pipeline stage plus sweeps and oracles.

#include "nlosia/oracle.hpp"
#include "nlosia/pipeline.hpp"
#include "nlosia/sweep.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace nlosia;

namespace
{

struct CommonFlags
{
    std::string scenario;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<double> grid_oversample;
};

void add_common(CLI::App *cmd, CommonFlags &f, bool needs_scenario = true)
{
    auto *opt = cmd->add_option("--scenario", f.scenario, "Scenario file (JSON)");
    if (needs_scenario)
        opt->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", f.out, "Output directory");
    cmd->add_option("--seed", f.seed, "RNG seed override");
    cmd->add_option("--threads", f.threads, "Worker threads")->check(CLI::Range(1, 1024));
    cmd->add_option("--grid-oversample", f.grid_oversample, "Image grid oversampling factor")
        ->check(CLI::Range(0.25, 50.0));
}

Scenario load(const CommonFlags &f)
{
    RunOverrides o;
    o.seed = f.seed;
    o.threads = f.threads;
    o.grid_oversample = f.grid_oversample;
    return apply_overrides(load_scenario(f.scenario), o);
}

fs::path out_dir(const CommonFlags &f, const Scenario &s)
{
    if (!f.out.empty())
        return f.out;
    if (!s.output_dir.empty())
        return s.output_dir;
    return fs::path("out") / (s.name.empty() ? "scenario" : s.name);
}

void print_metrics(const Metrics &m)
{
    for (const auto &[k, v] : m)
        std::cout << k << " = " << v << '\n';
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"nlosia: NLOS imaging through a modular reflector during beam sweeping"};
    app.set_version_flag("--version", std::string(NLOSIA_VERSION));
    app.require_subcommand(1);

    CommonFlags f;
    auto *design = app.add_subcommand("design", "Write reflector phases and the beam codebook");
    add_common(design, f);
    auto *simulate = app.add_subcommand("simulate", "Synthesize echoes to a binary tensor");
    add_common(simulate, f);
    auto *image = app.add_subcommand("image", "Back-project echoes into an image grid");
    add_common(image, f);
    bool compensate = false;
    image->add_flag("--compensate", compensate, "Focus with the scene's first target velocity");
    auto *velocity = app.add_subcommand("estimate-velocity", "Estimate target velocities from the beam sweep");
    add_common(velocity, f);
    auto *run = app.add_subcommand("run", "Run design, simulation, imaging and velocity stages");
    add_common(run, f);

    auto *sweep = app.add_subcommand("sweep", "Run a parameter sweep and write metrics CSV");
    add_common(sweep, f);

    auto *oracle = app.add_subcommand("oracle", "Check closed forms against brute-force oracles");
    add_common(oracle, f, false);
    std::string kind_name;
    OracleConfig oc;
    oracle->add_option("--kind", kind_name, "coverage_vs_closed_form | saf_vs_closed_form | gain_bruteforce | crb_montecarlo")
        ->required();
    oracle->add_option("--cases", oc.cases, "Random geometries")->check(CLI::Range(1, 100000));
    oracle->add_option("--trials", oc.trials, "Monte-Carlo trials")->check(CLI::Range(1, 1000000));
    oracle->add_option("--snr", oc.snr_db, "Per-beam SNR in dB")->check(CLI::Range(-50.0, 100.0));

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*oracle)
        {
            const OracleKind kind = parse_oracle_kind(kind_name);
            if (f.seed)
                oc.seed = *f.seed;
            if (f.threads)
                oc.threads = *f.threads;
            const OracleReport report = run_oracle(kind, oc);
            const fs::path out = f.out.empty() ? fs::path("out") / "oracle" : fs::path(f.out);
            fs::create_directories(out);
            write_oracle_csv(out / (std::string(to_string(kind)) + ".csv"), report);
            int failed = 0;
            for (const auto &r : report.rows)
                failed += r.pass ? 0 : 1;
            std::cout << to_string(kind) << ": " << report.rows.size() - failed << '/' << report.rows.size()
                      << " within tolerance " << report.tolerance << " -> " << (report.passed ? "PASS" : "FAIL")
                      << '\n';
            return report.passed ? 0 : 2;
        }
        if (*sweep)
        {
            SweepSpec spec = load_sweep(f.scenario);
            if (f.seed)
                spec.base.seed = *f.seed;
            if (f.grid_oversample)
                spec.base.imaging.grid_oversample = *f.grid_oversample;
            const int threads = f.threads.value_or(spec.base.threads);
            const fs::path out = f.out.empty() ? out_dir(f, spec.base) / "sweep" : fs::path(f.out);
            const auto rows = run_sweep(spec, threads);
            write_sweep(out, spec, rows);
            int failed = 0;
            for (const auto &r : rows)
                failed += r.reason.empty() ? 0 : 1;
            std::cout << "sweep " << to_string(spec.parameter) << ": " << rows.size() << " rows, " << failed
                      << " failed points -> " << out.string() << '\n';
            return 0;
        }

        const Scenario s = load(f);
        const fs::path out = out_dir(f, s);
        if (*run)
        {
            print_metrics(run_scenario(s, out, f.scenario));
            return 0;
        }
        fs::create_directories(out);
        {
            std::ofstream os(out / "manifest.json");
            os << dump_manifest(s, f.scenario);
        }
        const SensingSystem system = build_system(s);
        if (*design)
        {
            stage_design(s, system, out);
            std::cout << "design: " << system.design().module_count << " modules, " << system.beam_count()
                      << " beams -> " << out.string() << '\n';
        }
        else if (*simulate)
        {
            const EchoTensor e = stage_simulate(s, system, out);
            std::cout << "simulate: " << e.beam_count << " beams x " << e.subcarrier_count << " subcarriers -> "
                      << (out / "echoes.bin").string() << '\n';
        }
        else if (*image)
        {
            const EchoTensor e = load_or_simulate(s, system, out);
            Vec2 xi{};
            if (compensate && !s.targets.empty())
                xi = s.targets.front().velocity_xy();
            const ImageGrid img = stage_image(s, system, e, out, xi);
            const PeakLocation pk = find_peak(img);
            std::cout << "image: " << img.grid.axis1.count << " x " << img.grid.axis2.count << " pixels, peak at R = "
                      << pk.axis1 << " m, psi = " << rad2deg(pk.axis2) << " deg\n";
        }
        else if (*velocity)
        {
            const EchoTensor e = load_or_simulate(s, system, out);
            for (const auto &r : stage_velocity(s, system, e, out))
                std::cout << "target " << r.id << ": v_R = " << r.estimate.v_radial
                          << " m/s, v_T = " << r.estimate.v_transverse << " m/s"
                          << (r.error.empty() ? "" : " (" + r.error + ")") << '\n';
        }
        return 0;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
