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

#include "nlosia/common.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <istream>
#include <ostream>

namespace nlosia::detail
{

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

// Little-endian scalar write.
template <typename T> void put(std::ostream &os, T value)
{
    auto raw = std::bit_cast<std::array<char, sizeof(T)>>(value);
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(raw.begin(), raw.end());
    os.write(raw.data(), raw.size());
}

// Little-endian scalar read; what names the container in the error.
template <typename T> T get(std::istream &is, const char *what)
{
    std::array<char, sizeof(T)> raw{};
    if (!is.read(raw.data(), raw.size()))
        throw Error(std::string(what) + ": truncated file");
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(raw.begin(), raw.end());
    return std::bit_cast<T>(raw);
}

} // namespace nlosia::detail
