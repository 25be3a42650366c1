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

#include <chrono>
#include <cstddef>
#include <cstdint>

namespace wjoin {

/// Tuple timestamps and window lengths: milliseconds of the master clock.
using Timestamp = std::chrono::milliseconds;

/// Virtual (or scaled wall) clock used for node timelines.
using SimTime = std::chrono::nanoseconds;

using GroupId = std::uint32_t;
using NodeId = std::uint16_t;

enum class StreamId : std::uint8_t { S1 = 1, S2 = 2 };

constexpr std::size_t stream_index(StreamId s) { return s == StreamId::S1 ? 0 : 1; }
constexpr StreamId stream_at(std::size_t index) { return index == 0 ? StreamId::S1 : StreamId::S2; }
constexpr StreamId opposite(StreamId s) { return s == StreamId::S1 ? StreamId::S2 : StreamId::S1; }

inline constexpr std::uint32_t kMaxJoinKey = 10'000'000;

inline Timestamp to_timestamp(SimTime t) { return std::chrono::floor<Timestamp>(t); }

template <class Rep, class Period>
SimTime to_sim_time(std::chrono::duration<Rep, Period> d) {
    return std::chrono::duration_cast<SimTime>(d);
}

inline SimTime seconds(double s) {
    return std::chrono::duration_cast<SimTime>(std::chrono::duration<double>(s));
}

inline double to_seconds(SimTime t) { return std::chrono::duration<double>(t).count(); }

}// namespace wjoin
