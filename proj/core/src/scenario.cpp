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

#include "nlosia/scenario.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <fstream>
#include "json_node.hpp"
#include <random>
#include <set>
#include <sstream>

namespace nlosia
{

namespace
{

using detail::Node;
using nlohmann::json;
using nlohmann::ordered_json;

constexpr double kMaxLength = 1e4;
constexpr double kMaxSpeed = 1e3;

SceneGeometry read_geometry(Node n, double bandwidth)
{
    SceneGeometry g;
    g.reflector_half_length = 0.5 * n.number("reflector_length_m", 1e-3, 1e3);
    Node roi = n.child("roi");
    g.roi.center = roi.vec2("center_m", -kMaxLength, kMaxLength);
    if (roi.has("size_range_cells"))
    {
        const double cells = roi.number("size_range_cells", 1e-3, 1e5);
        const double side = cells * kSpeedOfLight / (2.0 * bandwidth);
        g.roi.size = {side, side};
    }
    else
        g.roi.size = roi.vec2("size_m", 1e-3, kMaxLength);
    roi.finish();
    if (n.has("bs_position_m"))
        g.bs_position = n.vec2("bs_position_m", -kMaxLength, kMaxLength);
    else
    {
        const double height = n.number("bs_height_m", 1e-2, kMaxLength);
        const double incidence = deg2rad(n.number("incidence_center_deg", -89.0, 89.0));
        g = SceneGeometry::from_incidence(height, incidence, g.reflector_length(), g.roi);
    }
    n.finish();
    g.validate();
    return g;
}

OfdmConfig read_ofdm(Node n)
{
    OfdmConfig c;
    c.carrier_frequency = n.number("carrier_hz", 1e8, 3e11);
    c.numerology = static_cast<int>(n.integer_or("numerology", c.numerology, 0, 6));
    c.pilot_duration = n.number_or("pilot_duration_s", c.pilot_duration, 1e-7, 1e-2);
    c.tx_power = n.number_or("tx_power_w", c.tx_power, 1e-9, 1e5);
    c.noise_psd_dbm_hz = n.number_or("noise_psd_dbm_hz", c.noise_psd_dbm_hz, -250.0, -100.0);
    if (n.has("subcarriers"))
        c.subcarrier_count = static_cast<int>(n.integer("subcarriers", 1, 1 << 20));
    else
    {
        const double b = n.number("bandwidth_hz", 1e3, 1e11);
        const double psd = c.noise_psd_dbm_hz;
        c = OfdmConfig::with_bandwidth(c.carrier_frequency, b, c.numerology, c.pilot_duration, c.tx_power);
        c.noise_psd_dbm_hz = psd;
    }
    n.finish();
    c.validate();
    return c;
}

BsArray read_array(Node n, double wavelength)
{
    BsArray a;
    if (n.has("aperture_m"))
        a = BsArray::for_aperture(n.number("aperture_m", 1e-3, 1e2), wavelength);
    else
    {
        a.element_count = static_cast<int>(n.integer("elements", 1, 1 << 16));
        a.element_spacing = n.number("spacing_m", 1e-5, 1e1);
    }
    n.finish();
    a.validate();
    return a;
}

DesignKind design_kind(const Node &n, const std::string &s)
{
    if (s == "modular")
        return DesignKind::ModularLinear;
    if (s == "lens")
        return DesignKind::Lens;
    if (s == "mirror")
        return DesignKind::Mirror;
    throw Error(n.field("kind") + ": expected one of modular, lens, mirror");
}

const char *design_key(DesignKind k)
{
    switch (k)
    {
    case DesignKind::ModularLinear:
        return "modular";
    case DesignKind::Lens:
        return "lens";
    case DesignKind::Mirror:
        return "mirror";
    }
    return "modular";
}

CodebookKind codebook_kind(const Node &n, const std::string &s)
{
    if (s == "imaging")
        return CodebookKind::Imaging;
    if (s == "3gpp")
        return CodebookKind::Standard3gpp;
    if (s == "union")
        return CodebookKind::Union;
    throw Error(n.field("kind") + ": expected one of imaging, 3gpp, union");
}

std::vector<TargetState> read_scene(Node n, std::uint64_t seed)
{
    std::vector<TargetState> out;
    if (n.has("preset"))
    {
        Node p = n.child("preset");
        const std::string kind = p.string_or("kind", "");
        if (kind != "two_lines")
            p.fail("preset kind must be two_lines");
        const Vec2 c = p.vec2("center_m", -kMaxLength, kMaxLength);
        const double spacing = p.number("spacing_m", 1e-3, 1e3);
        const double rcs = p.number("rcs_m2", 1e-10, 1e6);
        p.finish();
        out = two_line_targets(c, spacing, rcs, seed);
    }
    if (n.has("targets"))
    {
        const json &arr = n.raw("targets");
        if (!arr.is_array())
            throw Error(n.field("targets") + ": expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i)
            out.push_back(detail::read_target(Node(arr[i], fmt::format("{}[{}]", n.field("targets"), i))));
    }
    n.finish();
    return out;
}

std::size_t line_of(std::string_view text, std::size_t byte)
{
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

ordered_json to_json(const Scenario &s)
{
    ordered_json j;
    j["schema_version"] = s.schema_version;
    j["name"] = s.name;
    j["seed"] = s.seed;
    if (!s.output_dir.empty())
        j["output_dir"] = s.output_dir;
    j["threads"] = s.threads;
    const auto &g = s.geometry;
    j["geometry"] = {{"bs_position_m", {g.bs_position.x, g.bs_position.y}},
                     {"reflector_length_m", g.reflector_length()},
                     {"roi", {{"center_m", {g.roi.center.x, g.roi.center.y}}, {"size_m", {g.roi.size.x, g.roi.size.y}}}}};
    const auto &o = s.ofdm;
    j["ofdm"] = {{"carrier_hz", o.carrier_frequency},       {"subcarriers", o.subcarrier_count},
                 {"numerology", o.numerology},              {"pilot_duration_s", o.pilot_duration},
                 {"tx_power_w", o.tx_power},                {"noise_psd_dbm_hz", o.noise_psd_dbm_hz}};
    j["array"] = {{"elements", s.array.element_count}, {"spacing_m", s.array.element_spacing}};
    ordered_json r = {{"kind", design_key(s.reflector.kind)}, {"modules", s.reflector.modules}};
    if (s.reflector.focus)
        r["focus_m"] = {s.reflector.focus->x, s.reflector.focus->y};
    j["reflector"] = r;
    j["codebook"] = {{"kind", to_string(s.codebook.kind)}, {"step_scale", s.codebook.step_scale}};
    ordered_json targets = ordered_json::array();
    for (const auto &t : s.targets)
        targets.push_back({{"radius_m", t.position.radius},
                           {"angle_rad", t.position.angle},
                           {"v_radial_mps", t.velocity_radial},
                           {"v_transverse_mps", t.velocity_transverse},
                           {"rcs_m2", t.rcs},
                           {"phase_rad", t.scattering_phase}});
    j["scene"] = {{"targets", targets}};
    j["synthesis"] = {{"noise", s.synthesis.noise},
                      {"range_migration", s.synthesis.range_migration},
                      {"incoherent_targets", s.synthesis.incoherent_targets}};
    j["imaging"] = {{"grid_oversample", s.imaging.grid_oversample},
                    {"gain_floor_db", s.imaging.gain_floor_db},
                    {"range_oversample", s.imaging.range_oversample},
                    {"exact_range_sum", s.imaging.exact_range_sum},
                    {"weighting", to_string(s.imaging.weighting)},
                    {"compensate_velocity", s.imaging.compensate_velocity}};
    j["velocity"] = {{"enabled", s.velocity.enabled},
                     {"rounds", s.velocity.rounds},
                     {"max_targets", s.velocity.max_targets},
                     {"threshold_db", s.velocity.threshold_db}};
    return j;
}

} // namespace

TargetState detail::read_target(Node n)
{
    TargetState t;
    if (n.has("position_m"))
        t.position = PolarPoint::from_cartesian(n.vec2("position_m", -kMaxLength, kMaxLength));
    else
    {
        t.position.radius = n.number("radius_m", 1e-3, kMaxLength);
        t.position.angle = n.has("angle_rad") ? n.number("angle_rad", -kPi / 2, kPi / 2)
                                              : deg2rad(n.number("angle_deg", -90.0, 90.0));
    }
    t.velocity_radial = n.number_or("v_radial_mps", 0.0, -kMaxSpeed, kMaxSpeed);
    t.velocity_transverse = n.number_or("v_transverse_mps", 0.0, -kMaxSpeed, kMaxSpeed);
    t.rcs = n.number_or("rcs_m2", 1.0, 1e-10, 1e6);
    t.scattering_phase = n.number_or("phase_rad", 0.0, -4.0 * kPi, 4.0 * kPi);
    n.finish();
    t.validate();
    return t;
}

const char *to_string(CodebookKind kind)
{
    switch (kind)
    {
    case CodebookKind::Imaging:
        return "imaging";
    case CodebookKind::Standard3gpp:
        return "3gpp";
    case CodebookKind::Union:
        return "union";
    }
    return "imaging";
}

Scenario parse_scenario(std::string_view text, const std::string &source)
{
    json j;
    try
    {
        j = json::parse(text.begin(), text.end());
    }
    catch (const json::parse_error &e)
    {
        throw Error(fmt::format("{}:{}: syntax error: {}", source, line_of(text, e.byte), e.what()));
    }
    Node root(j, "scenario");
    Scenario s;
    s.schema_version = static_cast<int>(root.integer("schema_version", 1, 1000));
    if (s.schema_version != kScenarioSchemaVersion)
        throw Error(fmt::format("scenario.schema_version: unsupported version {} (expected {})", s.schema_version,
                                kScenarioSchemaVersion));
    if (!root.has("seed"))
        root.fail("missing required field 'seed'");
    const json &seed = root.raw("seed");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0))
        throw Error("scenario.seed: expected a non-negative integer");
    s.seed = seed.get<std::uint64_t>();
    s.name = root.string_or("name", "scenario");
    s.output_dir = root.string_or("output_dir", "");
    s.threads = static_cast<int>(root.integer_or("threads", 1, 1, 1024));
    if (root.has("provenance"))
        root.raw("provenance");

    s.ofdm = read_ofdm(root.child("ofdm"));
    s.geometry = read_geometry(root.child("geometry"), s.ofdm.bandwidth());
    s.array = read_array(root.child("array"), s.ofdm.wavelength());

    Node refl = root.child("reflector");
    s.reflector.kind = design_kind(refl, refl.string_or("kind", "modular"));
    s.reflector.modules = static_cast<int>(refl.integer_or("modules", s.reflector.modules, 1, 100000));
    if (s.reflector.kind != DesignKind::ModularLinear && !refl.has("modules"))
        s.reflector.modules = 1;
    if (refl.has("focus_m"))
        s.reflector.focus = refl.vec2("focus_m", -kMaxLength, kMaxLength);
    refl.finish();

    if (root.has("codebook"))
    {
        Node cb = root.child("codebook");
        s.codebook.kind = codebook_kind(cb, cb.string_or("kind", "imaging"));
        s.codebook.step_scale = cb.number_or("step_scale", 1.0, 1e-2, 1e2);
        cb.finish();
    }

    s.targets = root.has("scene") ? read_scene(root.child("scene"), s.seed) : std::vector<TargetState>{};

    if (root.has("synthesis"))
    {
        Node n = root.child("synthesis");
        s.synthesis.noise = n.boolean_or("noise", true);
        s.synthesis.range_migration = n.boolean_or("range_migration", false);
        s.synthesis.incoherent_targets = n.boolean_or("incoherent_targets", false);
        n.finish();
    }
    if (root.has("imaging"))
    {
        Node n = root.child("imaging");
        s.imaging.grid_oversample = n.number_or("grid_oversample", 3.0, 0.25, 50.0);
        s.imaging.gain_floor_db = n.number_or("gain_floor_db", -20.0, -200.0, 0.0);
        s.imaging.range_oversample = static_cast<int>(n.integer_or("range_oversample", 8, 1, 64));
        s.imaging.exact_range_sum = n.boolean_or("exact_range_sum", false);
        const std::string weighting = n.string_or("weighting", "inverse");
        if (weighting != "inverse" && weighting != "matched")
            throw Error(n.field("weighting") + ": expected one of inverse, matched");
        s.imaging.weighting = parse_beam_weighting(weighting);
        s.imaging.compensate_velocity = n.boolean_or("compensate_velocity", false);
        n.finish();
    }
    if (root.has("velocity"))
    {
        Node n = root.child("velocity");
        s.velocity.enabled = n.boolean_or("enabled", false);
        s.velocity.rounds = static_cast<int>(n.integer_or("rounds", 1, 1, 100));
        s.velocity.max_targets = static_cast<int>(n.integer_or("max_targets", 1, 1, 1000));
        s.velocity.threshold_db = n.number_or("threshold_db", 8.0, 0.0, 100.0);
        n.finish();
    }
    root.finish();
    return s;
}

Scenario load_scenario(const std::filesystem::path &path)
{
    std::ifstream is(path);
    if (!is)
        throw Error("scenario: cannot open " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_scenario(ss.str(), path.string());
}

std::string dump_scenario(const Scenario &scenario) { return to_json(scenario).dump(2) + "\n"; }

std::string dump_manifest(const Scenario &scenario, const std::string &source)
{
    ordered_json j = to_json(scenario);
    j["provenance"] = {{"tool", "nlosia"}, {"version", NLOSIA_VERSION}, {"source", source}};
    return j.dump(2) + "\n";
}

std::vector<TargetState> two_line_targets(Vec2 center, double spacing, double rcs, std::uint64_t seed)
{
    std::vector<Vec2> points;
    for (int i = -4; i <= 4; ++i)
        points.push_back({center.x + i * spacing, center.y});
    for (int i = 1; i <= 4; ++i)
    {
        points.push_back({center.x, center.y - i * spacing});
        points.push_back({center.x, center.y + i * spacing});
    }
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x54475453u};
    std::mt19937_64 eng(seq);
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    std::vector<TargetState> out;
    for (const Vec2 &p : points)
    {
        TargetState t;
        t.position = PolarPoint::from_cartesian(p);
        t.rcs = rcs;
        t.scattering_phase = phase(eng);
        out.push_back(t);
    }
    return out;
}

Codebook build_codebook(const Scenario &s)
{
    const Codebook imaging = make_imaging_codebook(s.geometry, s.ofdm, s.codebook.step_scale);
    switch (s.codebook.kind)
    {
    case CodebookKind::Imaging:
        return imaging;
    case CodebookKind::Standard3gpp:
        return reflector_subset(make_3gpp_codebook(s.array), s.geometry);
    case CodebookKind::Union:
        return reflector_subset(union_codebook(imaging, make_3gpp_codebook(s.array)), s.geometry);
    }
    return imaging;
}

ReflectorDesign build_design(const Scenario &s, const Codebook &codebook)
{
    const double lambda = s.ofdm.wavelength();
    if (codebook.size() == 0)
        throw Error("scenario: no codebook beam reaches the reflector");
    switch (s.reflector.kind)
    {
    case DesignKind::ModularLinear:
        return design_modular(s.geometry, s.reflector.modules, codebook, lambda);
    case DesignKind::Lens:
        return design_lens(s.geometry, s.reflector.focus.value_or(s.geometry.roi.center), lambda, s.reflector.modules);
    case DesignKind::Mirror:
        return design_anomalous_mirror(s.geometry, codebook, lambda);
    }
    throw Error("scenario: unknown reflector kind");
}

SensingSystem build_system(const Scenario &s)
{
    Codebook cb = build_codebook(s);
    ReflectorDesign design = build_design(s, cb);
    return SensingSystem(s.geometry, s.ofdm, s.array, std::move(design), std::move(cb));
}

} // namespace nlosia
