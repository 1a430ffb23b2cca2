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

#include <algorithm>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace nlosia::detail
{

// Runs fn(begin, end) over contiguous chunks of [0, n). Chunks are disjoint, so results written
// per index do not depend on the thread count.
inline void parallel_for(int n, int threads, const std::function<void(int, int)> &fn)
{
    threads = std::max(1, std::min(threads, n));
    if (threads == 1)
    {
        if (n > 0)
            fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex mtx;
    const int chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t)
    {
        const int b = t * chunk, e = std::min(n, b + chunk);
        if (b >= e)
            break;
        pool.emplace_back([&, b, e] {
            try
            {
                fn(b, e);
            }
            catch (...)
            {
                std::lock_guard lock(mtx);
                if (!error)
                    error = std::current_exception();
            }
        });
    }
    for (auto &th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
}

} // namespace nlosia::detail
