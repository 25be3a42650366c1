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

#include <array>
#include <map>
#include <set>
#include <vector>

namespace wjoin {

/// Master-side input buffer: one FIFO mini-buffer per (stream, partition-group), plus the
/// group-to-slave mapping.
class MasterBuffer {
  public:
    MasterBuffer(std::uint32_t n_part, std::size_t capacity_tuples);

    std::uint32_t n_part() const { return n_part_; }

    /// Appends to the mini-buffer of the tuple's stream and group. OverloadFault when full.
    void accept(const Tuple& t);

    /// Empties the mini-buffers of the given groups (both streams) and returns their tuples in
    /// arrival order.
    std::vector<Tuple> drain(const std::set<GroupId>& groups);

    std::size_t size(StreamId s) const { return stream_size_[stream_index(s)]; }
    std::size_t size() const { return stream_size_[0] + stream_size_[1]; }
    std::size_t group_size(StreamId s, GroupId g) const { return buffers_[stream_index(s)][g].size(); }

    std::uint64_t accepted() const { return accepted_; }
    std::uint64_t drained() const { return drained_; }

    NodeId owner(GroupId g) const { return owner_.at(g); }
    void assign(GroupId g, NodeId slave);
    std::set<GroupId> groups_of(NodeId slave) const;
    std::map<NodeId, std::set<GroupId>> assignment() const;

    /// Every group owned by exactly one of `actives`.
    bool mapping_consistent(const std::set<NodeId>& actives) const;

  private:
    std::uint32_t n_part_;
    std::size_t capacity_;
    std::array<std::vector<std::vector<Tuple>>, 2> buffers_;
    std::array<std::size_t, 2> stream_size_{0, 0};
    std::vector<NodeId> owner_;
    std::uint64_t accepted_ = 0;
    std::uint64_t drained_ = 0;
};

}// namespace wjoin
