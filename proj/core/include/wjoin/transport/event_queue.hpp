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

#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <vector>

namespace wjoin {

/// Deterministic discrete-event queue. Events fire in (time, sender, sequence) order.
class EventQueue {
  public:
    using Callback = std::function<void()>;

    /// Schedules `cb` at `at`. Scheduling into the past is a logic error.
    std::uint64_t schedule(SimTime at, NodeId sender, Callback cb);

    /// Fires every event with time <= until, including ones scheduled while firing.
    /// Leaves the queue clock at `until`. Returns the number of events fired.
    std::size_t advance_clock(SimTime until);

    SimTime now() const { return now_; }
    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }
    std::optional<SimTime> next_time() const;

  private:
    struct Event {
        SimTime at;
        NodeId sender;
        std::uint64_t seq;
        Callback cb;
    };
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            if (a.at != b.at) {
                return a.at > b.at;
            }
            if (a.sender != b.sender) {
                return a.sender > b.sender;
            }
            return a.seq > b.seq;
        }
    };

    std::priority_queue<Event, std::vector<Event>, Later> heap_;
    SimTime now_{0};
    std::uint64_t next_seq_ = 0;
};

}// namespace wjoin
