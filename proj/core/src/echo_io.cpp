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

#include "nlosia/channel.hpp"

#include "binary_io.hpp"

#include <cstring>
#include <fmt/format.h>
#include <fstream>
#include <sstream>
#include <string>

namespace nlosia
{

namespace
{

using detail::get;
using detail::put;

constexpr char kMagic[8] = {'N', 'L', 'O', 'S', 'E', 'C', 'H', 'O'};
constexpr std::uint32_t kVersion = 1;

} // namespace

void write_echo_tensor(const std::filesystem::path &path, const EchoTensor &echoes)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw Error("echo tensor: cannot open " + path.string());
    os.write(kMagic, sizeof(kMagic));
    put<std::uint32_t>(os, kVersion);
    put<std::uint64_t>(os, static_cast<std::uint64_t>(echoes.subcarrier_count));
    put<std::uint64_t>(os, static_cast<std::uint64_t>(echoes.beam_count));
    put<double>(os, echoes.carrier_frequency);
    put<double>(os, echoes.subcarrier_spacing);
    put<std::uint64_t>(os, echoes.seed);
    put<double>(os, echoes.noise_power);
    for (const Complex &c : echoes.samples)
    {
        put<double>(os, c.real());
        put<double>(os, c.imag());
    }
}

EchoTensor read_echo_tensor(const std::filesystem::path &path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw Error("echo tensor: cannot open " + path.string());
    char magic[8];
    if (!is.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw Error("echo tensor: bad magic in " + path.string());
    if (get<std::uint32_t>(is, "echo tensor") != kVersion)
        throw Error("echo tensor: unsupported version");
    EchoTensor e;
    e.subcarrier_count = static_cast<int>(get<std::uint64_t>(is, "echo tensor"));
    e.beam_count = static_cast<int>(get<std::uint64_t>(is, "echo tensor"));
    e.carrier_frequency = get<double>(is, "echo tensor");
    e.subcarrier_spacing = get<double>(is, "echo tensor");
    e.seed = get<std::uint64_t>(is, "echo tensor");
    e.noise_power = get<double>(is, "echo tensor");
    e.samples.resize(static_cast<std::size_t>(e.subcarrier_count) * e.beam_count);
    for (Complex &c : e.samples)
    {
        const double re = get<double>(is, "echo tensor");
        const double im = get<double>(is, "echo tensor");
        c = {re, im};
    }
    return e;
}

void write_beam_sidecar_csv(const std::filesystem::path &path, const EchoTensor &echoes)
{
    std::ofstream os(path);
    if (!os)
        throw Error("echo sidecar: cannot open " + path.string());
    os << "beam,slot,incidence_angle_rad,incidence_x_m,incidence_distance_m,first_atom,last_atom,misses_reflector\n";
    for (std::size_t b = 0; b < echoes.per_beam.size(); ++b)
    {
        const auto &r = echoes.per_beam[b];
        os << fmt::format("{},{},{:.17g},{:.17g},{:.17g},{},{},{}\n", b, r.slot, r.incidence_angle, r.incidence_x,
                          r.incidence_distance, r.first_atom, r.last_atom, r.misses_reflector ? 1 : 0);
    }
}

std::vector<BeamRecord> read_beam_sidecar_csv(const std::filesystem::path &path)
{
    std::ifstream is(path);
    if (!is)
        throw Error("echo sidecar: cannot open " + path.string());
    std::string line;
    std::getline(is, line);
    std::vector<BeamRecord> out;
    int row = 1;
    while (std::getline(is, line))
    {
        ++row;
        if (line.empty())
            continue;
        std::stringstream ss(line);
        std::string f[8];
        for (auto &s : f)
            if (!std::getline(ss, s, ','))
                throw Error(fmt::format("echo sidecar: line {} has too few fields", row));
        BeamRecord r;
        r.slot = std::stoi(f[1]);
        r.incidence_angle = std::stod(f[2]);
        r.incidence_x = std::stod(f[3]);
        r.incidence_distance = std::stod(f[4]);
        r.first_atom = std::stoi(f[5]);
        r.last_atom = std::stoi(f[6]);
        r.misses_reflector = f[7] == "1";
        out.push_back(r);
    }
    return out;
}

} // namespace nlosia
