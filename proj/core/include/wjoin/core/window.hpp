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

#include <wjoin/core/tuple.hpp>
#include <wjoin/core/types.hpp>

namespace wjoin {

struct WindowSpec {
    Timestamp w1{600'000};
    Timestamp w2{600'000};

    Timestamp for_stream(StreamId s) const { return s == StreamId::S1 ? w1 : w2; }

    /// Throws ConfigError unless both windows are strictly positive.
    void validate() const;
};

/// True iff tuple.timestamp lies in the closed interval [now - W, now] of the tuple's stream.
/// Requires now >= tuple.timestamp.
bool window_membership(Timestamp now, const Tuple& tuple, const WindowSpec& spec);

/// Sliding-window join predicate for a pair from opposite streams: equal keys, and the older
/// tuple is inside its window at the arrival time of the newer one.
bool joinable(const Tuple& a, const Tuple& b, const WindowSpec& spec);

}// namespace wjoin
