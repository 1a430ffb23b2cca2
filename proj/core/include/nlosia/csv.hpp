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

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace nlosia
{

// Round-trip exact decimal rendering; nan and inf spelled as such.
std::string format_number(double value);

class CsvWriter
{
public:
    CsvWriter(const std::filesystem::path &path, std::initializer_list<std::string_view> header);

    CsvWriter &cell(std::string_view text);
    CsvWriter &cell(double value);
    CsvWriter &cell(long long value);
    CsvWriter &cell(int value) { return cell(static_cast<long long>(value)); }
    CsvWriter &cell(std::size_t value) { return cell(static_cast<long long>(value)); }
    void end_row();

private:
    std::ofstream os_;
    std::size_t columns_ = 0;
    std::size_t current_ = 0;
};

} // namespace nlosia
