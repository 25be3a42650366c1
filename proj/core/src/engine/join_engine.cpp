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
#include <wjoin/engine/join_engine.hpp>

#include <fmt/format.h>
#include <stdexcept>

namespace wjoin {

JoinEngine::JoinEngine(EngineConfig config)
    : config_((config.validate(), config)), buffer_(config_.buffer_bytes, config_.n_part) {}

void JoinEngine::add_group(GroupId group) {
    if (group >= config_.n_part) {
        throw ProtocolFault(fmt::format("group {} outside [0, {})", group, config_.n_part));
    }
    if (!owns(group)) {
        groups_.emplace(group, std::make_unique<PartitionGroup>(group, config_));
    }
}

std::vector<GroupId> JoinEngine::groups() const {
    std::vector<GroupId> out;
    out.reserve(groups_.size());
    for (const auto& [g, _] : groups_) {
        out.push_back(g);
    }
    return out;
}

PartitionGroup& JoinEngine::group(GroupId group) {
    auto it = groups_.find(group);
    if (it == groups_.end()) {
        throw ProtocolFault(fmt::format("group {} is not owned here", group));
    }
    return *it->second;
}

const PartitionGroup& JoinEngine::group(GroupId group) const { return const_cast<JoinEngine*>(this)->group(group); }

void JoinEngine::ingest_batch(std::span<const Tuple> batch, std::uint64_t epoch, IngestMode mode, SimTime now) {
    for (const auto& t : batch) {
        const auto g = hash_partition(t.join_key, config_.n_part);
        if (!owns(g)) {
            throw ProtocolFault(fmt::format("tuple for group {} delivered to a non-owner", g));
        }
    }
    buffer_.ingest(batch, epoch, mode, now);
}

std::vector<JoinResult> JoinEngine::process_pending(GroupId g, WorkMeter& meter) {
    auto& pg = group(g);
    std::vector<JoinResult> out;
    const auto arrivals = buffer_.drain(g);
    pg.insert_and_join(arrivals, meter, out);
    return out;
}

std::vector<JoinResult> JoinEngine::expire_blocks(GroupId g, Timestamp now, WorkMeter& meter) {
    std::vector<JoinResult> out;
    group(g).expire(now, meter, out);
    return out;
}

TuneReport JoinEngine::tune_partitions(GroupId g, WorkMeter& meter) { return group(g).tune(meter); }

std::vector<JoinResult> JoinEngine::flush_fresh(GroupId g, WorkMeter& meter) {
    std::vector<JoinResult> out;
    group(g).flush_fresh(meter, out);
    return out;
}

StateTransfer JoinEngine::extract_state(GroupId g) {
    auto& pg = group(g);
    if (pg.has_fresh()) {
        throw std::logic_error("extract_state with fresh tuples");
    }
    StateTransfer st;
    st.group = g;
    const auto& dir = pg.directory();
    st.global_depth = dir.global_depth();
    const auto layout = dir.layout();
    for (std::size_t b = 0; b < dir.bucket_count(); ++b) {
        StateTransfer::Bucket out{layout[b], {}};
        for (const auto s : {StreamId::S1, StreamId::S2}) {
            for (const auto& block : dir.bucket(b).window(s)) {
                out.tuples.insert(out.tuples.end(), block.tuples().begin(), block.tuples().end());
            }
        }
        st.buckets.push_back(std::move(out));
    }
    st.pending = buffer_.take(g);
    groups_.erase(g);
    return st;
}

void JoinEngine::install_state(const StateTransfer& st) {
    if (st.group >= config_.n_part) {
        throw ProtocolFault(fmt::format("state for group {} outside [0, {})", st.group, config_.n_part));
    }
    if (owns(st.group)) {
        throw ProtocolFault(fmt::format("state for group {} which is already owned", st.group));
    }
    std::vector<BucketLayout> layout;
    for (const auto& b : st.buckets) {
        layout.push_back(b.layout);
    }
    auto pg = std::make_unique<PartitionGroup>(st.group, config_);
    auto& dir = pg->directory();
    dir = ExtendibleDirectory::from_layout(st.global_depth, layout);
    const auto cap = config_.block_tuples();
    for (std::size_t b = 0; b < st.buckets.size(); ++b) {
        std::array<std::vector<Tuple>, 2> split;
        for (const auto& t : st.buckets[b].tuples) {
            if (hash_partition(t.join_key, config_.n_part) != st.group || dir.bucket_for_key(t.join_key) != b) {
                throw ProtocolFault("state transfer tuple does not hash to its bucket");
            }
            auto& w = split[stream_index(t.stream)];
            if (!w.empty() && w.back().timestamp > t.timestamp) {
                throw ProtocolFault("state transfer window out of temporal order");
            }
            w.push_back(t);
        }
        for (std::size_t s = 0; s < 2; ++s) {
            auto blocks = pack_blocks(split[s], cap);
            dir.bucket(b).windows[s].assign(std::make_move_iterator(blocks.begin()),
                                            std::make_move_iterator(blocks.end()));
        }
    }
    for (const auto& t : st.pending) {
        if (hash_partition(t.join_key, config_.n_part) != st.group) {
            throw ProtocolFault("state transfer pending tuple for another group");
        }
    }
    buffer_.push_front(st.group, st.pending);
    groups_.emplace(st.group, std::move(pg));
}

std::size_t JoinEngine::window_tuples() const {
    std::size_t n = 0;
    for (const auto& [_, pg] : groups_) {
        n += pg->tuple_count();
    }
    return n;
}

}// namespace wjoin
