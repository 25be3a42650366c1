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
#include <wjoin/master/master_buffer.hpp>

#include <algorithm>
#include <fmt/format.h>

namespace wjoin {

MasterBuffer::MasterBuffer(std::uint32_t n_part, std::size_t capacity_tuples)
    : n_part_(n_part), capacity_(capacity_tuples), owner_(n_part, 0) {
    for (auto& b : buffers_) {
        b.resize(n_part);
    }
}

void MasterBuffer::accept(const Tuple& t) {
    if (size() >= capacity_) {
        throw OverloadFault(fmt::format("master buffer full at {} tuples", capacity_));
    }
    const auto s = stream_index(t.stream);
    buffers_[s][hash_partition(t.join_key, n_part_)].push_back(t);
    ++stream_size_[s];
    ++accepted_;
}

std::vector<Tuple> MasterBuffer::drain(const std::set<GroupId>& groups) {
    std::vector<Tuple> out;
    for (const auto g : groups) {
        for (std::size_t s = 0; s < 2; ++s) {
            auto& q = buffers_[s].at(g);
            out.insert(out.end(), q.begin(), q.end());
            stream_size_[s] -= q.size();
            q.clear();
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Tuple& a, const Tuple& b) { return a.sequence() < b.sequence(); });
    drained_ += out.size();
    return out;
}

void MasterBuffer::assign(GroupId g, NodeId slave) { owner_.at(g) = slave; }

std::set<GroupId> MasterBuffer::groups_of(NodeId slave) const {
    std::set<GroupId> out;
    for (GroupId g = 0; g < n_part_; ++g) {
        if (owner_[g] == slave) {
            out.insert(g);
        }
    }
    return out;
}

std::map<NodeId, std::set<GroupId>> MasterBuffer::assignment() const {
    std::map<NodeId, std::set<GroupId>> out;
    for (GroupId g = 0; g < n_part_; ++g) {
        out[owner_[g]].insert(g);
    }
    return out;
}

bool MasterBuffer::mapping_consistent(const std::set<NodeId>& actives) const {
    return std::all_of(owner_.begin(), owner_.end(), [&](NodeId o) { return actives.contains(o); });
}

}// namespace wjoin
