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

#include "nlosia/imaging.hpp"

#include "binary_io.hpp"

#include <cstring>
#include <fmt/format.h>
#include <fstream>

namespace nlosia
{

namespace
{

using detail::get;
using detail::put;

constexpr char kMagic[8] = {'N', 'L', 'O', 'S', 'I', 'M', 'A', 'G'};
constexpr std::uint32_t kVersion = 1;
constexpr const char *kWhat = "image";

std::ofstream open_text(const std::filesystem::path &path)
{
    std::ofstream os(path);
    if (!os)
        throw Error("image: cannot open " + path.string());
    return os;
}

} // namespace

void write_image_csv(const std::filesystem::path &path, const ImageGrid &image)
{
    auto os = open_text(path);
    const auto &g = image.grid;
    os << (g.kind == GridKind::Polar ? "i,j,radius_m,angle_rad,x_m,y_m,re,im,magnitude,skipped\n"
                                     : "i,j,x_m,y_m,x_m,y_m,re,im,magnitude,skipped\n");
    for (int i = 0; i < g.axis1.count; ++i)
        for (int j = 0; j < g.axis2.count; ++j)
        {
            const Vec2 p = g.pixel(i, j);
            const Complex v = image.at(i, j);
            const bool skipped = !image.skipped.empty() && image.skipped[g.index(i, j)];
            os << fmt::format("{},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", i, j,
                              g.axis1.at(i), g.axis2.at(j), p.x, p.y, v.real(), v.imag(), std::abs(v),
                              skipped ? 1 : 0);
        }
}

// Gnuplot nonuniform matrix: first row holds axis2 samples, first column axis1 samples.
void write_image_matrix(const std::filesystem::path &path, const ImageGrid &image)
{
    auto os = open_text(path);
    const auto &g = image.grid;
    os << g.axis2.count;
    for (int j = 0; j < g.axis2.count; ++j)
        os << fmt::format(" {:.17g}", g.axis2.at(j));
    os << '\n';
    for (int i = 0; i < g.axis1.count; ++i)
    {
        os << fmt::format("{:.17g}", g.axis1.at(i));
        for (int j = 0; j < g.axis2.count; ++j)
            os << fmt::format(" {:.17g}", image.magnitude(i, j));
        os << '\n';
    }
}

void write_image_binary(const std::filesystem::path &path, const ImageGrid &image)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw Error("image: cannot open " + path.string());
    const auto &g = image.grid;
    os.write(kMagic, sizeof(kMagic));
    put<std::uint32_t>(os, kVersion);
    put<std::uint8_t>(os, g.kind == GridKind::Polar ? 0 : 1);
    for (const Axis *a : {&g.axis1, &g.axis2})
    {
        put<double>(os, a->start);
        put<double>(os, a->step);
        put<std::uint64_t>(os, static_cast<std::uint64_t>(a->count));
    }
    put<double>(os, image.hypothesis_velocity.x);
    put<double>(os, image.hypothesis_velocity.y);
    for (const Complex &c : image.values)
    {
        put<double>(os, c.real());
        put<double>(os, c.imag());
    }
    for (std::size_t k = 0; k < image.values.size(); ++k)
        put<std::uint8_t>(os, image.skipped.empty() ? 0 : image.skipped[k]);
}

ImageGrid read_image_binary(const std::filesystem::path &path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw Error("image: cannot open " + path.string());
    char magic[8];
    if (!is.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw Error("image: bad magic in " + path.string());
    if (get<std::uint32_t>(is, kWhat) != kVersion)
        throw Error("image: unsupported version");
    ImageGrid img;
    const auto kind = get<std::uint8_t>(is, kWhat);
    if (kind > 1)
        throw Error("image: unknown grid kind");
    img.grid.kind = kind == 0 ? GridKind::Polar : GridKind::Cartesian;
    for (Axis *a : {&img.grid.axis1, &img.grid.axis2})
    {
        a->start = get<double>(is, kWhat);
        a->step = get<double>(is, kWhat);
        a->count = static_cast<int>(get<std::uint64_t>(is, kWhat));
    }
    img.hypothesis_velocity.x = get<double>(is, kWhat);
    img.hypothesis_velocity.y = get<double>(is, kWhat);
    img.values.resize(img.grid.size());
    for (Complex &c : img.values)
    {
        const double re = get<double>(is, kWhat);
        const double im = get<double>(is, kWhat);
        c = {re, im};
    }
    img.skipped.resize(img.grid.size());
    for (auto &s : img.skipped)
        s = get<std::uint8_t>(is, kWhat);
    return img;
}

} // namespace nlosia
