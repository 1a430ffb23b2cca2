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

#include "nlosia/sweep.hpp"

#include "nlosia/csv.hpp"
#include "nlosia/oracle.hpp"
#include "nlosia/pipeline.hpp"
#include "nlosia/resolution.hpp"

#include "json_node.hpp"
#include "parallel.hpp"

#include <array>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>

namespace nlosia
{

namespace
{

using detail::Node;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename E, std::size_t N> E parse_enum(const std::array<E, N> &all, const std::string &s, const std::string &field)
{
    for (E e : all)
        if (s == to_string(e))
            return e;
    std::string opts;
    for (E e : all)
        opts += std::string(opts.empty() ? "" : ", ") + to_string(e);
    throw Error(field + ": '" + s + "' is not one of " + opts);
}

constexpr std::array kParameters{SweepParameter::ReflectorLength, SweepParameter::ModuleLength, SweepParameter::RoiSize,
                                 SweepParameter::Carrier, SweepParameter::Snr};
constexpr std::array kMetrics{SweepMetric::IaOverhead, SweepMetric::RhoPsi, SweepMetric::RhoR, SweepMetric::RmseVR,
                              SweepMetric::RmseVT,     SweepMetric::Crb,    SweepMetric::PeakSpreadDb};

std::uint64_t point_seed(std::uint64_t seed, std::size_t index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), 0x53574550u};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

std::vector<SweepRow> evaluate_point(const SweepSpec &spec, std::size_t index)
{
    const double value = spec.values[index];
    std::vector<SweepRow> rows;
    auto add = [&](const std::string &metric, double result, const std::string &reason = {}) {
        rows.push_back({value, metric, result, reason});
    };
    Scenario s;
    try
    {
        s = sweep_point(spec.base, spec.parameter, value);
        s.seed = point_seed(spec.base.seed, index);
        s.threads = 1;
    }
    catch (const Error &e)
    {
        for (SweepMetric m : spec.metrics)
            add(to_string(m), kNaN, e.what());
        return rows;
    }
    std::optional<SensingSystem> sys;
    std::optional<VelocityMonteCarlo> mc;
    for (SweepMetric m : spec.metrics)
    {
        try
        {
            switch (m)
            {
            case SweepMetric::IaOverhead:
                add(to_string(m), ia_durations(s.array, make_imaging_codebook(s.geometry, s.ofdm, s.codebook.step_scale),
                                               s.ofdm)
                                      .overhead);
                break;
            case SweepMetric::RhoPsi:
            case SweepMetric::RhoR: {
                if (!sys)
                    sys.emplace(build_system(s));
                double a = roi_effective_aperture(*sys);
                if (!(a > 0.0))
                    a = s.array.aperture();
                const auto r = nf_resolution(PolarPoint::from_cartesian(s.geometry.roi.center), a, s.ofdm);
                add(to_string(m), m == SweepMetric::RhoPsi ? r.rho_psi_nf : r.rho_R_nf);
                break;
            }
            case SweepMetric::RmseVR:
            case SweepMetric::RmseVT:
            case SweepMetric::Crb: {
                if (!mc)
                {
                    TargetState t = spec.target;
                    if (!spec.target_given)
                    {
                        t.position = PolarPoint::from_cartesian(s.geometry.roi.center);
                        t.velocity_radial = 1.0;
                        t.velocity_transverse = 1.0;
                    }
                    mc = velocity_monte_carlo(s, t, spec.trials, s.seed, 1);
                }
                if (m == SweepMetric::RmseVR)
                    add(to_string(m), mc->rmse_v_radial);
                else if (m == SweepMetric::RmseVT)
                    add(to_string(m), mc->rmse_v_transverse);
                else
                {
                    add("crb_vR", mc->crb_v_radial);
                    add("crb_vT", mc->crb_v_transverse);
                }
                break;
            }
            case SweepMetric::PeakSpreadDb: {
                if (s.targets.empty())
                    throw Error("peak spread needs targets in the scenario");
                if (!sys)
                    sys.emplace(build_system(s));
                const EchoTensor e = synthesize(*sys, s.targets, s.seed, s.synthesis);
                const ImageGrid img = BackProjector(*sys, e, backproject_options(s)).image(scenario_grid(s), {});
                add(to_string(m), amplitude_spread_db(assess_targets(img, s.targets)));
                break;
            }
            }
        }
        catch (const Error &e)
        {
            if (m == SweepMetric::Crb)
            {
                add("crb_vR", kNaN, e.what());
                add("crb_vT", kNaN, e.what());
            }
            else
                add(to_string(m), kNaN, e.what());
        }
    }
    return rows;
}

std::string sanitize(std::string s)
{
    for (char &c : s)
        if (c == ',' || c == '"' || c == '\n')
            c = ';';
    return s;
}

} // namespace

const char *to_string(SweepParameter p)
{
    switch (p)
    {
    case SweepParameter::ReflectorLength:
        return "reflector_length";
    case SweepParameter::ModuleLength:
        return "module_length";
    case SweepParameter::RoiSize:
        return "roi_size";
    case SweepParameter::Carrier:
        return "carrier";
    case SweepParameter::Snr:
        return "snr";
    }
    return "";
}

const char *to_string(SweepMetric m)
{
    switch (m)
    {
    case SweepMetric::IaOverhead:
        return "ia_overhead";
    case SweepMetric::RhoPsi:
        return "rho_psi";
    case SweepMetric::RhoR:
        return "rho_R";
    case SweepMetric::RmseVR:
        return "rmse_vR";
    case SweepMetric::RmseVT:
        return "rmse_vT";
    case SweepMetric::Crb:
        return "crb";
    case SweepMetric::PeakSpreadDb:
        return "peak_spread_dB";
    }
    return "";
}

SweepSpec parse_sweep(std::string_view text, const std::filesystem::path &base_dir, const std::string &source)
{
    nlohmann::json j;
    try
    {
        j = nlohmann::json::parse(text.begin(), text.end());
    }
    catch (const nlohmann::json::parse_error &e)
    {
        throw Error(source + ": syntax error: " + e.what());
    }
    Node root(j, "sweep");
    if (root.integer("schema_version", 1, 1000) != kScenarioSchemaVersion)
        root.fail("unsupported schema_version");
    SweepSpec spec;
    const nlohmann::json &sc = root.raw("scenario");
    if (sc.is_string())
    {
        std::filesystem::path p = sc.get<std::string>();
        spec.base = load_scenario(p.is_absolute() ? p : base_dir / p);
    }
    else if (sc.is_object())
        spec.base = parse_scenario(sc.dump(), source + ":scenario");
    else
        throw Error("sweep.scenario: expected a path or an object");
    spec.parameter = parse_enum(kParameters, root.string_or("parameter", ""), "sweep.parameter");
    const nlohmann::json &vals = root.raw("values");
    if (!vals.is_array() || vals.empty())
        throw Error("sweep.values: expected a non-empty numeric array");
    for (const auto &v : vals)
    {
        if (!v.is_number())
            throw Error("sweep.values: expected numbers");
        spec.values.push_back(v.get<double>());
    }
    const nlohmann::json &mets = root.raw("metrics");
    if (!mets.is_array() || mets.empty())
        throw Error("sweep.metrics: expected a non-empty array");
    for (const auto &m : mets)
    {
        if (!m.is_string())
            throw Error("sweep.metrics: expected strings");
        spec.metrics.push_back(parse_enum(kMetrics, m.get<std::string>(), "sweep.metrics"));
    }
    spec.trials = static_cast<int>(root.integer_or("trials", spec.trials, 2, 100000));
    if (root.has("target"))
    {
        spec.target = detail::read_target(root.child("target"));
        spec.target_given = true;
    }
    root.finish();
    return spec;
}

SweepSpec load_sweep(const std::filesystem::path &path)
{
    std::ifstream is(path);
    if (!is)
        throw Error("sweep: cannot open " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_sweep(ss.str(), path.parent_path(), path.string());
}

Scenario sweep_point(const Scenario &base, SweepParameter parameter, double value)
{
    Scenario s = base;
    if (!(value > 0.0) && parameter != SweepParameter::Snr)
        throw Error(fmt::format("sweep: {} value must be positive", to_string(parameter)));
    switch (parameter)
    {
    case SweepParameter::ReflectorLength: {
        // Module length held fixed.
        const double a_mod = base.geometry.reflector_length() / base.reflector.modules;
        s.geometry.reflector_half_length = 0.5 * value;
        if (s.reflector.kind == DesignKind::ModularLinear)
            s.reflector.modules = std::max(1, static_cast<int>(std::lround(value / a_mod)));
        break;
    }
    case SweepParameter::ModuleLength:
        if (s.reflector.kind != DesignKind::ModularLinear)
            throw Error("sweep: module_length requires a modular design");
        s.reflector.modules = std::max(1, static_cast<int>(std::lround(base.geometry.reflector_length() / value)));
        break;
    case SweepParameter::RoiSize:
        s.geometry.roi.size = {value, value};
        break;
    case SweepParameter::Carrier: {
        // Bandwidth and array element count scale with the carrier; the array aperture is kept.
        const double bw = base.ofdm.bandwidth() * value / base.ofdm.carrier_frequency;
        const double psd = base.ofdm.noise_psd_dbm_hz;
        s.ofdm = OfdmConfig::with_bandwidth(value, bw, base.ofdm.numerology, base.ofdm.pilot_duration,
                                            base.ofdm.tx_power);
        s.ofdm.noise_psd_dbm_hz = psd;
        s.array = BsArray::for_aperture(base.array.aperture(), s.ofdm.wavelength());
        break;
    }
    case SweepParameter::Snr:
        // Offset in dB applied to the transmit power.
        s.ofdm.tx_power = base.ofdm.tx_power * from_db10(value);
        break;
    }
    s.geometry.validate();
    s.ofdm.validate();
    return s;
}

std::vector<SweepRow> run_sweep(const SweepSpec &spec, int threads)
{
    if (spec.values.empty())
        throw Error("sweep: empty value list");
    std::vector<std::vector<SweepRow>> per_point(spec.values.size());
    detail::parallel_for(static_cast<int>(spec.values.size()), threads, [&](int i0, int i1) {
        for (int i = i0; i < i1; ++i)
            per_point[i] = evaluate_point(spec, static_cast<std::size_t>(i));
    });
    std::vector<SweepRow> rows;
    for (auto &p : per_point)
        rows.insert(rows.end(), p.begin(), p.end());
    return rows;
}

void write_sweep(const std::filesystem::path &out, const SweepSpec &spec, const std::vector<SweepRow> &rows)
{
    std::filesystem::create_directories(out);
    CsvWriter w(out / "sweep.csv", {"parameter", "value", "metric", "result", "reason"});
    for (const auto &r : rows)
    {
        w.cell(to_string(spec.parameter)).cell(r.value).cell(r.metric).cell(r.result).cell(sanitize(r.reason));
        w.end_row();
    }
    // One gnuplot data block per metric, separated by two blank lines.
    std::vector<std::string> order;
    std::map<std::string, std::vector<const SweepRow *>> by_metric;
    for (const auto &r : rows)
    {
        if (!by_metric.count(r.metric))
            order.push_back(r.metric);
        by_metric[r.metric].push_back(&r);
    }
    std::ofstream os(out / "sweep.dat");
    if (!os)
        throw Error("sweep: cannot write " + (out / "sweep.dat").string());
    for (std::size_t k = 0; k < order.size(); ++k)
    {
        if (k > 0)
            os << "\n\n";
        os << "# " << to_string(spec.parameter) << ' ' << order[k] << '\n';
        for (const SweepRow *r : by_metric[order[k]])
            os << format_number(r->value) << ' ' << format_number(r->result) << '\n';
    }
}

} // namespace nlosia
