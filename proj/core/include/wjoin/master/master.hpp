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

#include <wjoin/master/classification.hpp>
#include <wjoin/master/master_buffer.hpp>
#include <wjoin/master/master_config.hpp>
#include <wjoin/metrics/run_record.hpp>
#include <wjoin/transport/clock.hpp>
#include <wjoin/transport/transport.hpp>
#include <wjoin/workload/feed.hpp>

#include <functional>
#include <random>
#include <set>
#include <vector>

namespace wjoin {

class Master;

/// Extra moves injected at a reorganization (testing hook); called with the reorganization index.
using ForcedMoves = std::function<std::vector<MoveInstruction>(std::uint64_t reorganization, const Master& master)>;

struct MasterStats {
    std::array<std::uint64_t, 2> peak_stream_tuples{0, 0};
    std::vector<std::uint64_t> peak_per_interval;
    std::vector<std::uint64_t> moves_per_interval;
    std::vector<std::uint32_t> active_per_interval;
    std::uint64_t moves = 0;
    std::uint64_t reorganizations = 0;
    std::uint64_t batches = 0;
    std::uint64_t tuples_sent = 0;
};

/// Gateway node. Buffers arrivals per partition-group and drives the epoch schedule: each
/// distribution epoch t_d is split into slots, one per sub-group of active slaves; every t_r
/// the master collects load reports, moves groups from suppliers to consumers and adjusts the
/// number of active slaves.
class Master {
  public:
    Master(MasterConfig config, Transport& transport, NodeClock& clock, ArrivalSource& arrivals,
           RunRecord* record = nullptr);

    const MasterConfig& config() const { return config_; }

    /// Initial group assignment: round-robin over slaves 1..initial_active.
    const MasterBuffer& buffer() const { return buffer_; }
    std::set<NodeId> active_slaves() const { return active_; }
    std::vector<std::vector<NodeId>> subgroups() const { return subgroups_; }

    /// Tuple timestamped with the master clock and queued for its group.
    void accept_tuple(const Tuple& t);

    /// Instant of the next scheduled slot.
    SimTime next_tick() const;
    bool finished() const { return finished_; }

    /// Handles the next slot: reorganization when due, then distribution to the slot's sub-group.
    /// After the final drain cycle it shuts the nodes down.
    void tick();

    /// Ticks until finished, waiting on the node clock between slots.
    void run();

    void set_forced_moves(ForcedMoves hook) { forced_ = std::move(hook); }

    const MasterStats& stats() const { return stats_; }
    std::uint64_t cycle() const { return cycle_; }

  private:
    void pull_arrivals();
    void distribute_slot();
    void reorganize();
    void execute_move(const MoveInstruction& move);
    void decrease(const std::vector<NodeState>& states, const std::vector<MoveInstruction>& moves);
    void increase();
    void recompute_subgroups();
    void shutdown();
    std::uint32_t slots_per_cycle() const { return static_cast<std::uint32_t>(subgroups_.size()); }
    void note_interval_state();

    MasterConfig config_;
    Transport& transport_;
    NodeClock& clock_;
    ArrivalSource& arrivals_;
    RunRecord* record_;
    MasterBuffer buffer_;
    std::set<NodeId> active_;
    std::vector<std::vector<NodeId>> subgroups_;
    std::mt19937_64 rng_;
    ForcedMoves forced_;
    std::uint64_t cycle_ = 0;
    std::uint32_t slot_ = 0;
    SimTime cycle_start_{0};
    bool finished_ = false;
    MasterStats stats_;
};

}// namespace wjoin
