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

#include <wjoin/core/errors.hpp>
#include <wjoin/core/hash.hpp>
#include <wjoin/engine/slave_buffer.hpp>

#include <algorithm>
#include <fmt/format.h>

namespace wjoin {

SlaveBuffer::SlaveBuffer(std::size_t capacity_bytes, std::uint32_t n_part)
    : capacity_bytes_(capacity_bytes), n_part_(n_part) {}

void SlaveBuffer::ingest(std::span<const Tuple> batch, std::uint64_t epoch, IngestMode mode, SimTime now) {
    while (!in_flight_.empty() && in_flight_.front().first <= now) {
        in_flight_tuples_ -= in_flight_.front().second;
        in_flight_.pop_front();
    }
    const auto needed = (occupied_tuples() + batch.size()) * kTupleWireBytes;
    if (needed > capacity_bytes_) {
        if (mode == IngestMode::strict) {
            throw OverloadFault(fmt::format("slave buffer overflow: {} bytes queued, capacity {}", needed,
                                            capacity_bytes_));
        }
        ++overloads_;
    }
    for (const auto& t : batch) {
        queues_[hash_partition(t.join_key, n_part_)].push_back(t);
    }
    size_ += batch.size();
    const double fill = static_cast<double>(needed) / static_cast<double>(capacity_bytes_);
    samples_.push_back({epoch, std::min(fill, 1.0)});
}

void SlaveBuffer::retire(SimTime finish, std::size_t tuples) {
    if (tuples == 0) {
        return;
    }
    in_flight_.emplace_back(finish, tuples);
    in_flight_tuples_ += tuples;
}

std::vector<Tuple> SlaveBuffer::drain(GroupId group) {
    auto it = queues_.find(group);
    if (it == queues_.end()) {
        return {};
    }
    auto out = std::move(it->second);
    queues_.erase(it);
    size_ -= out.size();
    return out;
}

void SlaveBuffer::push_front(GroupId group, std::span<const Tuple> tuples) {
    if (tuples.empty()) {
        return;
    }
    auto& q = queues_[group];
    q.insert(q.begin(), tuples.begin(), tuples.end());
    size_ += tuples.size();
}

std::size_t SlaveBuffer::pending(GroupId group) const {
    auto it = queues_.find(group);
    return it == queues_.end() ? 0 : it->second.size();
}

std::vector<OccupancySample> SlaveBuffer::take_samples() { return std::exchange(samples_, {}); }

}// namespace wjoin
