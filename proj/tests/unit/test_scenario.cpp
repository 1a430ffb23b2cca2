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
#include "test_support.hpp"

#include "nlosia/sweep.hpp"

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

using namespace nlosia;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

namespace
{

std::string slurp(const std::filesystem::path &p)
{
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::string minimal(const std::string &extra_top = "", const std::string &carrier = "15e9")
{
    return R"({
  "schema_version": 1, "seed": 3,)" +
           extra_top + R"(
  "geometry": {"bs_height_m": 5, "incidence_center_deg": 20, "reflector_length_m": 0.6,
               "roi": {"center_m": [0, 15], "size_m": [2, 2]}},
  "ofdm": {"carrier_hz": )" +
           carrier + R"(, "bandwidth_hz": 100e6},
  "array": {"aperture_m": 0.4},
  "reflector": {"kind": "modular", "modules": 8}
})";
}

std::map<std::string, double> by_value(const std::vector<SweepRow> &rows, const std::string &metric)
{
    std::map<std::string, double> out;
    for (const auto &r : rows)
        if (r.metric == metric)
            out[std::to_string(r.value)] = r.result;
    return out;
}

} // namespace

TEST_CASE("bundled Fig. 5 modular scenario", "[scenario]")
{
    const Scenario s = test::bundled("fig5d_modular");
    CHECK(s.geometry.reflector_length() == Approx(1.2));
    CHECK(s.ofdm.carrier_frequency == Approx(15e9));
    CHECK(s.reflector.kind == DesignKind::ModularLinear);
    CHECK(s.reflector.modules == 15);
    REQUIRE(s.targets.size() == 17);
    for (const auto &t : s.targets)
        CHECK(t.rcs == Approx(0.01));
    for (const char *name : {"fig5a_mirror_3gpp", "fig5b_mirror_imaging", "fig5c_lens", "fr3_15ghz", "fr2_28ghz",
                             "moving_target", "empty_scene"})
        CHECK_NOTHROW(test::bundled(name));
}

TEST_CASE("scenario validation names the field", "[scenario]")
{
    CHECK_NOTHROW(parse_scenario(minimal()));
    CHECK_THROWS_WITH(parse_scenario(minimal(R"( "colour": 1,)")), ContainsSubstring("colour"));
    CHECK_THROWS_WITH(parse_scenario(minimal("", "15")), ContainsSubstring("carrier_hz"));
    std::string no_seed = minimal();
    no_seed.replace(no_seed.find("\"seed\": 3,"), 10, "");
    CHECK_THROWS_WITH(parse_scenario(no_seed), ContainsSubstring("seed"));
    std::string bad_weight = minimal(R"( "imaging": {"weighting": "flat"},)");
    CHECK_THROWS_WITH(parse_scenario(bad_weight), ContainsSubstring("imaging.weighting"));
    CHECK_THROWS_WITH(parse_scenario("{ \"seed\": 1,"), ContainsSubstring("syntax"));
}

TEST_CASE("dump and parse round trip", "[scenario]")
{
    Scenario s = test::bundled("moving_target");
    s.imaging.weighting = BeamWeighting::Matched;
    const std::string text = dump_scenario(s);
    const Scenario r = parse_scenario(text);
    CHECK(dump_scenario(r) == text);
    CHECK(r.imaging.weighting == BeamWeighting::Matched);
    CHECK_NOTHROW(parse_scenario(dump_manifest(s, "test")));
}

TEST_CASE("run_scenario outputs are reproducible", "[scenario]")
{
    const Scenario s = test::bundled("empty_scene");
    const auto base = std::filesystem::temp_directory_path() / "nlosia_repro";
    std::filesystem::remove_all(base);
    const Metrics m1 = run_scenario(s, base / "a", "empty_scene");
    const Scenario again = parse_scenario(slurp(base / "a" / "manifest.json"));
    run_scenario(again, base / "b", "manifest");
    for (const char *f : {"metrics.csv", "image.csv", "targets.csv", "codebook.csv", "design.csv"})
    {
        INFO(f);
        CHECK(slurp(base / "a" / f) == slurp(base / "b" / f));
    }
    CHECK(std::filesystem::exists(base / "a" / "echoes.bin"));
    std::filesystem::remove_all(base);
}

TEST_CASE("reflector-length sweep trends", "[sweep]")
{
    SweepSpec spec;
    spec.base = test::bundled("fr3_15ghz");
    spec.parameter = SweepParameter::ReflectorLength;
    spec.values = {0.6, 0.9, 1.2, 1.5};
    spec.metrics = {SweepMetric::RhoPsi, SweepMetric::IaOverhead};
    const auto rows = run_sweep(spec);
    const auto rho = by_value(rows, "rho_psi");
    const auto ia = by_value(rows, "ia_overhead");
    REQUIRE(rho.size() == 4);
    double prev_rho = 1e300, prev_ia = 0.0;
    for (double v : spec.values)
    {
        const std::string k = std::to_string(v);
        CHECK(rho.at(k) < prev_rho);
        CHECK(ia.at(k) > prev_ia);
        prev_rho = rho.at(k);
        prev_ia = ia.at(k);
    }
}

TEST_CASE("carrier sweep and single-point consistency", "[sweep]")
{
    const SweepSpec spec = load_sweep(test::scenario_path("sweep_carrier"));
    const auto ia = by_value(run_sweep(spec), "ia_overhead");
    CHECK(ia.at(std::to_string(15e9)) > ia.at(std::to_string(28e9)));

    SweepSpec one = spec;
    one.values = {spec.base.ofdm.carrier_frequency};
    one.metrics = {SweepMetric::IaOverhead};
    const auto rows = run_sweep(one);
    REQUIRE(rows.size() == 1);
    Scenario empty = spec.base;
    empty.targets.clear();
    const auto dir = std::filesystem::temp_directory_path() / "nlosia_single_sweep";
    const Metrics m = run_scenario(empty, dir, "test");
    double overhead = 0.0;
    for (const auto &[k, v] : m)
        if (k == "ia_overhead")
            overhead = v;
    CHECK(rows[0].result == Approx(overhead));
    std::filesystem::remove_all(dir);
}
