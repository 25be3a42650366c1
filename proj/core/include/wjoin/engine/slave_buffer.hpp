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

#include <cstdint>
#include <deque>
#include <map>
#include <span>
#include <vector>

namespace wjoin {

struct OccupancySample {
    std::uint64_t epoch = 0;
    /// Buffer fill in [0, 1] right after a batch was admitted.
    double fill = 0.0;
};

enum class IngestMode {
    /// A batch that does not fit raises OverloadFault.
    strict,
    /// A batch that does not fit is admitted anyway and an overload event is recorded.
    saturating,
};

/// Input buffer of a slave, one FIFO mini-buffer per owned partition-group.
///
/// Tuples handed to the join module stay accounted as occupying the buffer until the instant
/// their processing finishes (`retire`), so occupancy reflects the backlog a slave carries
/// when a new batch arrives.
class SlaveBuffer {
  public:
    SlaveBuffer(std::size_t capacity_bytes, std::uint32_t n_part);

    /// Admits a batch delivered at `now` and records an occupancy sample.
    void ingest(std::span<const Tuple> batch, std::uint64_t epoch, IngestMode mode, SimTime now = SimTime{0});

    /// The join module finishes with `tuples` drained tuples at `finish`.
    void retire(SimTime finish, std::size_t tuples);

    /// Removes and returns the group's queued tuples in arrival order.
    std::vector<Tuple> drain(GroupId group);

    /// Queues tuples ahead of anything already buffered for the group.
    void push_front(GroupId group, std::span<const Tuple> tuples);

    /// Removes the group's queue without processing it.
    std::vector<Tuple> take(GroupId group) { return drain(group); }

    std::size_t pending(GroupId group) const;
    std::size_t size_tuples() const { return size_; }
    std::size_t size_bytes() const { return size_ * kTupleWireBytes; }
    /// Queued plus drained-but-unfinished tuples.
    std::size_t occupied_tuples() const { return size_ + in_flight_tuples_; }
    std::size_t capacity_bytes() const { return capacity_bytes_; }

    const std::vector<OccupancySample>& samples() const { return samples_; }
    std::vector<OccupancySample> take_samples();

    std::uint64_t overload_events() const { return overloads_; }

  private:
    std::size_t capacity_bytes_;
    std::uint32_t n_part_;
    std::size_t size_ = 0;
    std::map<GroupId, std::vector<Tuple>> queues_;
    std::deque<std::pair<SimTime, std::size_t>> in_flight_;
    std::size_t in_flight_tuples_ = 0;
    std::vector<OccupancySample> samples_;
    std::uint64_t overloads_ = 0;
};

}// namespace wjoin
