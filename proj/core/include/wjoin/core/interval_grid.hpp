/*
    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
*/

#pragma once

#include <wjoin/core/types.hpp>

#include <algorithm>
#include <cstdint>

namespace wjoin {

/// Tumbling measurement intervals that start after a warmup period.
struct IntervalGrid {
    SimTime warmup{0};
    SimTime length{seconds(600)};
    /// Number of intervals; the last one may be shorter than `length`.
    std::size_t count = 1;
    SimTime end{seconds(1200)};

    static IntervalGrid make(SimTime warmup, SimTime length, SimTime run_end);

    /// Interval index of an instant, or -1 during warmup. Instants past the end fall into the last interval.
    std::int64_t index(SimTime t) const {
        if (t < warmup) {
            return -1;
        }
        const auto i = (t - warmup) / length;
        return std::min<std::int64_t>(i, static_cast<std::int64_t>(count) - 1);
    }

    SimTime begin_of(std::size_t i) const { return warmup + length * static_cast<SimTime::rep>(i); }
    SimTime end_of(std::size_t i) const { return i + 1 == count ? end : begin_of(i + 1); }
};

}// namespace wjoin
