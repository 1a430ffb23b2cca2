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

#include "nlosia/oracle.hpp"
#include "nlosia/pipeline.hpp"

#include <benchmark/benchmark.h>

#include <array>
#include <numeric>

using namespace nlosia;

namespace
{

struct Fixture
{
    Scenario scenario = reference_scenario();
    SensingSystem system = build_system(scenario);
    std::array<TargetState, 1> scene{TargetState{}};
    EchoTensor echoes;

    Fixture()
    {
        scene[0].position = PolarPoint::from_cartesian(scenario.geometry.roi.center);
        echoes = synthesize(system, scene, scenario.seed, scenario.synthesis);
    }
};

const Fixture &fixture()
{
    static const Fixture f;
    return f;
}

} // namespace

static void BM_Synthesize(benchmark::State &state)
{
    const Fixture &f = fixture();
    for (auto _ : state)
        benchmark::DoNotOptimize(synthesize(f.system, f.scene, f.scenario.seed, f.scenario.synthesis));
    state.counters["beams"] = f.system.beam_count();
}
BENCHMARK(BM_Synthesize)->Unit(benchmark::kMillisecond);

static void BM_Backproject(benchmark::State &state)
{
    const Fixture &f = fixture();
    const GridSpec grid = scenario_grid(f.scenario);
    const BackprojectOptions opts = backproject_options(f.scenario);
    for (auto _ : state)
        benchmark::DoNotOptimize(backproject(f.system, f.echoes, grid, {}, opts));
    state.counters["pixels"] = static_cast<double>(grid.size());
}
BENCHMARK(BM_Backproject)->Unit(benchmark::kMillisecond);

static void BM_ReflectionGain(benchmark::State &state)
{
    const Fixture &f = fixture();
    const ReflectorDesign &d = f.system.design();
    std::vector<int> atoms(d.atom_count());
    std::iota(atoms.begin(), atoms.end(), 0);
    const double th = f.system.codebook().entries.front().angle;
    for (auto _ : state)
        benchmark::DoNotOptimize(reflection_gain(d, atoms, th, f.scenario.geometry.roi.center, f.scenario.geometry));
}
BENCHMARK(BM_ReflectionGain);

BENCHMARK_MAIN();
