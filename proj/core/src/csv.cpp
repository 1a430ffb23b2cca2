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

#include "nlosia/csv.hpp"

#include "nlosia/common.hpp"

#include <cmath>
#include <fmt/format.h>

namespace nlosia
{

std::string format_number(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    return fmt::format("{}", value);
}

CsvWriter::CsvWriter(const std::filesystem::path &path, std::initializer_list<std::string_view> header)
    : os_(path), columns_(header.size())
{
    if (!os_)
        throw Error("csv: cannot open " + path.string());
    for (auto h : header)
        cell(h);
    end_row();
}

CsvWriter &CsvWriter::cell(std::string_view text)
{
    if (text.find_first_of(",\"\n") != std::string_view::npos)
        throw Error("csv: field contains a separator: " + std::string(text));
    if (current_++ > 0)
        os_ << ',';
    os_ << text;
    return *this;
}

CsvWriter &CsvWriter::cell(double value) { return cell(std::string_view(format_number(value))); }

CsvWriter &CsvWriter::cell(long long value) { return cell(std::string_view(std::to_string(value))); }

void CsvWriter::end_row()
{
    if (current_ != columns_)
        throw Error(fmt::format("csv: row has {} fields, header has {}", current_, columns_));
    os_ << '\n';
    current_ = 0;
}

} // namespace nlosia
