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

#include <wjoin/core/interval_grid.hpp>
#include <wjoin/metrics/join_result.hpp>
#include <wjoin/transport/transport.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace wjoin {

struct DelayStats {
    std::uint64_t count = 0;
    /// Sum of production delays in milliseconds.
    std::int64_t sum_ms = 0;
    Timestamp max{0};

    std::optional<double> average_ms() const {
        if (count == 0) {
            return std::nullopt;
        }
        return static_cast<double>(sum_ms) / static_cast<double>(count);
    }
};

/// Collector node: receives result batches from slaves and aggregates production delay per
/// measurement interval (by emission time). Results emitted during warmup are counted but
/// excluded from the interval aggregates.
class Collector final : public MessageHandler {
  public:
    Collector(NodeId self, IntervalGrid grid, bool retain_results);

    std::optional<EpochMessage> on_message(const EpochMessage& msg) override;

    void add(std::span<const JoinResult> results);

    const std::vector<JoinResult>& retained() const { return retained_; }
    std::uint64_t total_results() const { return total_; }
    std::uint64_t negative_delays() const { return negative_; }
    const DelayStats& interval(std::size_t i) const { return intervals_.at(i); }
    std::size_t interval_count() const { return intervals_.size(); }
    bool shut_down() const { return shut_down_; }

  private:
    NodeId self_;
    IntervalGrid grid_;
    bool retain_;
    std::vector<DelayStats> intervals_;
    std::vector<JoinResult> retained_;
    std::uint64_t total_ = 0;
    std::uint64_t negative_ = 0;
    bool shut_down_ = false;
};

}// namespace wjoin
