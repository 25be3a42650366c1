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

#include <wjoin/engine/engine_config.hpp>
#include <wjoin/engine/partition_group.hpp>
#include <wjoin/engine/slave_buffer.hpp>
#include <wjoin/engine/state_transfer.hpp>
#include <wjoin/engine/work_meter.hpp>

#include <map>
#include <memory>
#include <span>
#include <vector>

namespace wjoin {

/// Window state and input buffer of one slave: the partition-groups it owns.
class JoinEngine {
  public:
    explicit JoinEngine(EngineConfig config);

    const EngineConfig& config() const { return config_; }

    void add_group(GroupId group);
    bool owns(GroupId group) const { return groups_.contains(group); }
    std::vector<GroupId> groups() const;
    PartitionGroup& group(GroupId group);
    const PartitionGroup& group(GroupId group) const;

    SlaveBuffer& buffer() { return buffer_; }
    const SlaveBuffer& buffer() const { return buffer_; }

    /// Queues a batch. Every tuple must hash to an owned group (ProtocolFault otherwise).
    void ingest_batch(std::span<const Tuple> batch, std::uint64_t epoch, IngestMode mode = IngestMode::strict,
                      SimTime now = SimTime{0});

    /// Drains the group's mini-buffer into its windows, joining as blocks fill.
    std::vector<JoinResult> process_pending(GroupId group, WorkMeter& meter);

    std::vector<JoinResult> expire_blocks(GroupId group, Timestamp now, WorkMeter& meter);

    TuneReport tune_partitions(GroupId group, WorkMeter& meter);

    std::vector<JoinResult> flush_fresh(GroupId group, WorkMeter& meter);

    /// Removes a group and returns its serialized state, including unprocessed buffered tuples.
    /// The group must hold no fresh tuples.
    StateTransfer extract_state(GroupId group);

    /// Rebuilds a transferred group. Throws ProtocolFault on malformed or misrouted state.
    void install_state(const StateTransfer& state);

    std::size_t window_tuples() const;
    std::size_t window_bytes() const { return window_tuples() * kTupleWireBytes; }

  private:
    EngineConfig config_;
    SlaveBuffer buffer_;
    std::map<GroupId, std::unique_ptr<PartitionGroup>> groups_;
};

}// namespace wjoin
