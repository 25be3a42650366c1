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
#include <wjoin/engine/join_engine.hpp>
#include <wjoin/metrics/run_record.hpp>
#include <wjoin/transport/clock.hpp>
#include <wjoin/transport/protocol.hpp>
#include <wjoin/transport/transport.hpp>

#include <functional>
#include <optional>
#include <set>
#include <vector>

namespace wjoin {

using LoadScript = std::function<std::optional<double>(std::uint64_t epoch, NodeId slave)>;

struct SlaveConfig {
    NodeId id = 1;
    NodeId collector = 0;
    EngineConfig engine;
    CostModel cost;
    bool tuning = true;
    IngestMode ingest_mode = IngestMode::saturating;
    IntervalGrid grid;
};

/// Per-slave counters surfaced in the run metrics.
struct SlaveStats {
    std::vector<std::uint64_t> peak_window_bytes;
    std::vector<std::uint64_t> overloads_per_interval;
    std::uint64_t batches = 0;
    std::uint64_t results = 0;
    std::uint64_t splits = 0;
    std::uint64_t merges = 0;
    std::uint64_t refused_splits = 0;
    /// Buckets left out of range without a valid reason after tuning.
    std::uint64_t unjustified_buckets = 0;
};

/// Processing node: feeds distributed batches through its join engine, reports its buffer
/// occupancy and moves partition-groups in and out on the master's instructions.
class SlaveRuntime final : public MessageHandler {
  public:
    SlaveRuntime(SlaveConfig config, Transport& transport, NodeClock& clock, RunRecord* record = nullptr);

    std::optional<EpochMessage> on_message(const EpochMessage& msg) override;

    /// Runs one distributed batch through every owned group: ingest, join, expire, tune.
    std::vector<JoinResult> on_distribution(const TupleBatchPayload& batch, SimTime delivered_at);

    /// Mean of the occupancy samples since the last report (0 with no samples); clears them.
    LoadReportPayload report_load();

    /// Extracts the group and ships it to the consumer. Returns after the consumer's ack.
    void on_move_out(const MoveInstruction& move);

    void expect_move_in(const MoveInstruction& move);
    void on_state_transfer(const StateTransfer& state);

    NodeId id() const { return config_.id; }
    bool active() const { return active_; }
    void set_active(bool active) { active_ = active; }
    bool shut_down() const { return shut_down_; }

    JoinEngine& engine() { return engine_; }
    const JoinEngine& engine() const { return engine_; }
    const SlaveStats& stats() const { return stats_; }
    NodeClock& clock() { return clock_; }

    /// Replaces the measured occupancy in load reports (scripted load traces). The script is
    /// asked with the reorganization's epoch and this slave's id; nullopt keeps the measurement.
    void set_load_script(LoadScript script) { load_script_ = std::move(script); }

  private:
    WorkMeter make_meter() const;
    void forward(std::vector<JoinResult> results);

    SlaveConfig config_;
    Transport& transport_;
    NodeClock& clock_;
    RunRecord* record_;
    JoinEngine engine_;
    bool active_ = false;
    bool shut_down_ = false;
    std::set<GroupId> expected_;
    std::uint64_t epoch_ = 0;
    LoadScript load_script_;
    SlaveStats stats_;
};

}// namespace wjoin
