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

#include "nlosia/geometry.hpp"

#include <fmt/format.h>
#include <json.hpp>
#include <set>
#include <string>

namespace nlosia::detail
{

// Object reader that tracks consumed keys so leftovers can be reported.
class Node
{
public:
    Node(const nlohmann::json &j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object())
            fail("expected an object");
    }

    [[noreturn]] void fail(const std::string &what) const { throw Error(path_ + ": " + what); }
    std::string field(const std::string &key) const { return path_ + "." + key; }

    bool has(const std::string &key) const { return j_.contains(key); }

    const nlohmann::json &raw(const std::string &key)
    {
        used_.insert(key);
        const auto it = j_.find(key);
        if (it == j_.end())
            fail("missing required field '" + key + "'");
        return *it;
    }

    Node child(const std::string &key) { return Node(raw(key), field(key)); }

    double number(const std::string &key, double lo, double hi)
    {
        const nlohmann::json &v = raw(key);
        if (!v.is_number())
            throw Error(field(key) + ": expected a number");
        const double x = v.get<double>();
        if (!(x >= lo && x <= hi))
            throw Error(fmt::format("{}: value {} outside the sane range [{}, {}] (check units)", field(key), x, lo, hi));
        return x;
    }

    double number_or(const std::string &key, double fallback, double lo, double hi)
    {
        return has(key) ? number(key, lo, hi) : fallback;
    }

    std::int64_t integer(const std::string &key, std::int64_t lo, std::int64_t hi)
    {
        const nlohmann::json &v = raw(key);
        if (!v.is_number_integer())
            throw Error(field(key) + ": expected an integer");
        const auto x = v.get<std::int64_t>();
        if (x < lo || x > hi)
            throw Error(fmt::format("{}: value {} outside the sane range [{}, {}]", field(key), x, lo, hi));
        return x;
    }

    std::int64_t integer_or(const std::string &key, std::int64_t fallback, std::int64_t lo, std::int64_t hi)
    {
        return has(key) ? integer(key, lo, hi) : fallback;
    }

    bool boolean_or(const std::string &key, bool fallback)
    {
        if (!has(key))
            return fallback;
        const nlohmann::json &v = raw(key);
        if (!v.is_boolean())
            throw Error(field(key) + ": expected true or false");
        return v.get<bool>();
    }

    std::string string_or(const std::string &key, const std::string &fallback)
    {
        if (!has(key))
            return fallback;
        const nlohmann::json &v = raw(key);
        if (!v.is_string())
            throw Error(field(key) + ": expected a string");
        return v.get<std::string>();
    }

    Vec2 vec2(const std::string &key, double lo, double hi)
    {
        const nlohmann::json &v = raw(key);
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            throw Error(field(key) + ": expected a two-element numeric array");
        const Vec2 p{v[0].get<double>(), v[1].get<double>()};
        for (double x : {p.x, p.y})
            if (!(x >= lo && x <= hi))
                throw Error(fmt::format("{}: value {} outside the sane range [{}, {}] (check units)", field(key), x, lo,
                                        hi));
        return p;
    }

    void finish() const
    {
        for (const auto &[key, value] : j_.items())
            if (!used_.count(key))
                throw Error(field(key) + ": unknown key");
    }

private:
    const nlohmann::json &j_;
    std::string path_;
    std::set<std::string> used_;
};

TargetState read_target(Node n);

} // namespace nlosia::detail
