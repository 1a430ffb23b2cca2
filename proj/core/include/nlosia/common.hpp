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

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nlosia
{

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kSpeedOfLight = 299'792'458.0;

// Library error. Messages name the offending quantity.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct Vec2
{
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr bool operator==(const Vec2 &) const = default;
    constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
};

inline constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }

// Axis-aligned box given by center and full size.
struct Box
{
    Vec2 center;
    Vec2 size;

    Vec2 lower() const { return {center.x - size.x / 2, center.y - size.y / 2}; }
    Vec2 upper() const { return {center.x + size.x / 2, center.y + size.y / 2}; }
    bool contains(Vec2 p) const
    {
        const Vec2 lo = lower(), hi = upper();
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
    }
};

// sin(pi u)/(pi u)
inline double sinc(double u)
{
    if (std::abs(u) < 1e-12)
        return 1.0;
    return std::sin(kPi * u) / (kPi * u);
}

inline double to_db10(double x) { return 10.0 * std::log10(x); }
inline double to_db20(double x) { return 20.0 * std::log10(x); }
inline double from_db10(double db) { return std::pow(10.0, db / 10.0); }
inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

// Wraps to [0, 2 pi).
inline double wrap_two_pi(double a)
{
    double w = std::fmod(a, kTwoPi);
    if (w < 0)
        w += kTwoPi;
    return w >= kTwoPi ? 0.0 : w;
}

// Wraps to (-pi, pi].
inline double wrap_pi(double a)
{
    double w = std::remainder(a, kTwoPi);
    return w <= -kPi ? w + kTwoPi : w;
}

} // namespace nlosia
