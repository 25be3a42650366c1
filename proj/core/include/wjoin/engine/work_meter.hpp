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

namespace wjoin {

/// Simulated CPU cost of join work.
struct CostModel {
    SimTime per_comparison{100};
    /// Charged per tuple inserted into a window or moved by a split/merge.
    SimTime per_tuple{100};
};

/// Counts the work done while a node processes one message and tells the engine what the
/// clock reads at each emission.
///
/// In virtual mode time is the start instant plus the modelled cost of everything recorded so
/// far. In live mode time comes from the node's clock and the counters are informational.
class WorkMeter {
  public:
    WorkMeter(SimTime start, CostModel cost) : start_(start), cost_(cost) {}
    explicit WorkMeter(std::function<SimTime()> live_clock)
        : start_(live_clock()), live_(std::move(live_clock)) {}

    void add_comparisons(std::uint64_t n) { comparisons_ += n; }
    void add_tuples(std::uint64_t n) { tuples_ += n; }

    std::uint64_t comparisons() const { return comparisons_; }
    std::uint64_t tuples() const { return tuples_; }

    SimTime start() const { return start_; }

    SimTime charged() const {
        if (live_) {
            return live_() - start_;
        }
        return cost_.per_comparison * static_cast<SimTime::rep>(comparisons_)
            + cost_.per_tuple * static_cast<SimTime::rep>(tuples_);
    }

    SimTime now() const { return start_ + charged(); }
    Timestamp emit_timestamp() const { return to_timestamp(now()); }

  private:
    SimTime start_;
    CostModel cost_{};
    std::function<SimTime()> live_;
    std::uint64_t comparisons_ = 0;
    std::uint64_t tuples_ = 0;
};

}// namespace wjoin
