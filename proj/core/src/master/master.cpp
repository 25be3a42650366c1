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
#include <wjoin/master/master.hpp>

#include <algorithm>
#include <fmt/format.h>
#include <stdexcept>

namespace wjoin {

Master::Master(MasterConfig config, Transport& transport, NodeClock& clock, ArrivalSource& arrivals,
               RunRecord* record)
    : config_((config.validate(), std::move(config))), transport_(transport), clock_(clock), arrivals_(arrivals),
      record_(record), buffer_(config_.n_part, config_.buffer_capacity_tuples), rng_(config_.seed ^ 0x6A09E667F3BCC909ull) {
    for (NodeId id = 1; id <= config_.initial_active; ++id) {
        active_.insert(id);
    }
    for (GroupId g = 0; g < config_.n_part; ++g) {
        buffer_.assign(g, static_cast<NodeId>(1 + g % config_.initial_active));
    }
    stats_.peak_per_interval.assign(config_.grid.count, 0);
    stats_.moves_per_interval.assign(config_.grid.count, 0);
    stats_.active_per_interval.assign(config_.grid.count, 0);
    recompute_subgroups();
}

void Master::recompute_subgroups() {
    const auto n = std::min<std::size_t>(config_.epochs.n_g, active_.size());
    subgroups_.assign(n, {});
    std::size_t k = 0;
    for (const auto id : active_) {
        subgroups_[k++ % n].push_back(id);
    }
}

void Master::accept_tuple(const Tuple& t) { buffer_.accept(t); }

SimTime Master::next_tick() const {
    return cycle_start_ + config_.epochs.t_d * static_cast<SimTime::rep>(slot_ + 1) / slots_per_cycle();
}

void Master::pull_arrivals() {
    const auto now = clock_.now();
    while (const auto* a = arrivals_.peek()) {
        if (a->at > now) {
            break;
        }
        accept_tuple(a->tuple);
        arrivals_.pop();
    }
}

void Master::note_interval_state() {
    if (const auto i = config_.grid.index(clock_.now()); i >= 0) {
        stats_.active_per_interval[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(active_.size());
    }
}

void Master::tick() {
    if (finished_) {
        return;
    }
    const auto k = config_.epochs.cycles_per_reorganization();
    if (slot_ == 0 && cycle_ > 0 && cycle_ % k == 0 && cycle_start_ < config_.run_end && (config_.adaptive || forced_)) {
        clock_.wait_until(cycle_start_);
        reorganize();
    }
    clock_.wait_until(next_tick());
    pull_arrivals();
    distribute_slot();
    note_interval_state();
    if (++slot_ == slots_per_cycle()) {
        const auto finished_cycle_start = cycle_start_;
        slot_ = 0;
        ++cycle_;
        cycle_start_ += config_.epochs.t_d;
        if (finished_cycle_start >= config_.run_end) {
            shutdown();
        }
    }
}

void Master::run() {
    while (!finished_) {
        tick();
    }
}

void Master::distribute_slot() {
    const auto& members = subgroups_[slot_];
    transport_.guard().begin_slot(cycle_, slot_, members);

    std::uint64_t peak = 0;
    for (const auto s : {StreamId::S1, StreamId::S2}) {
        const auto n = buffer_.size(s);
        auto& overall = stats_.peak_stream_tuples[stream_index(s)];
        overall = std::max<std::uint64_t>(overall, n);
        peak = std::max<std::uint64_t>(peak, n);
    }
    if (const auto i = config_.grid.index(clock_.now()); i >= 0) {
        auto& p = stats_.peak_per_interval[static_cast<std::size_t>(i)];
        p = std::max(p, peak);
    }

    const auto cut = to_timestamp(clock_.now());
    for (const auto id : members) {
        TupleBatchPayload batch{cycle_, slot_, cut, buffer_.drain(buffer_.groups_of(id))};
        ++stats_.batches;
        stats_.tuples_sent += batch.tuples.size();
        transport_.send(make_message(MessageKind::TupleBatch, kMasterNode, id, batch.encode()));
    }
}

void Master::execute_move(const MoveInstruction& move) {
    const auto in_ack = transport_.request(make_message(MessageKind::MoveIn, kMasterNode, move.consumer, move.encode()));
    if (in_ack.kind != MessageKind::Ack) {
        throw ProtocolFault(fmt::format("consumer {} did not acknowledge move-in", move.consumer));
    }
    const auto out_ack =
        transport_.request(make_message(MessageKind::MoveOut, kMasterNode, move.supplier, move.encode()));
    if (out_ack.kind != MessageKind::Ack || AckPayload::decode(out_ack.payload).group != move.group) {
        throw ProtocolFault(fmt::format("supplier {} did not acknowledge move-out", move.supplier));
    }
    buffer_.assign(move.group, move.consumer);
    ++stats_.moves;
    if (const auto i = config_.grid.index(clock_.now()); i >= 0) {
        ++stats_.moves_per_interval[static_cast<std::size_t>(i)];
    }
    if (record_) {
        record_->add({cycle_, "move", move.supplier, move.group, std::nullopt, 0, 0});
    }
}

void Master::reorganize() {
    const auto reorg = stats_.reorganizations++;
    transport_.guard().begin_reorganization(cycle_);

    std::vector<LoadReportEntry> reports;
    for (const auto id : active_) {
        const auto reply = transport_.request(
            make_message(MessageKind::LoadRequest, kMasterNode, id, LoadRequestPayload{cycle_}.encode()));
        if (reply.kind != MessageKind::LoadReport || reply.sender != id) {
            throw ProtocolFault(fmt::format("expected a load report from slave {}", id));
        }
        reports.push_back({id, LoadReportPayload::decode(reply.payload).occupancy});
    }
    std::map<NodeId, std::set<GroupId>> groups;
    for (const auto id : active_) {
        groups[id] = buffer_.groups_of(id);
    }
    const auto states = classify_slaves(reports, groups, config_.epochs.th_sup, config_.epochs.th_con);
    if (record_) {
        record_->add({cycle_, "reorganization", std::nullopt, std::nullopt, std::nullopt, 0, 0});
        for (const auto& s : states) {
            record_->add({cycle_, classification_name(s.classification), s.slave_id, std::nullopt, s.occupancy, 0, 0});
        }
    }

    std::vector<MoveInstruction> moves;
    if (config_.adaptive) {
        moves = plan_reorganization(states, rng_);
    }
    if (forced_) {
        for (const auto& m : forced_(reorg, *this)) {
            const bool taken = std::any_of(moves.begin(), moves.end(), [&](const auto& o) { return o.group == m.group; });
            if (taken) {
                if (record_) {
                    record_->add({cycle_, "forced_move_skipped", m.supplier, m.group, std::nullopt, 0, 0});
                }
                continue;
            }
            if (m.group >= config_.n_part || buffer_.owner(m.group) != m.supplier || !active_.contains(m.consumer)
                || m.consumer == m.supplier) {
                throw std::logic_error(fmt::format("invalid forced move of group {} from {} to {}", m.group,
                                                   m.supplier, m.consumer));
            }
            moves.push_back(m);
        }
    }
    for (const auto& m : moves) {
        execute_move(m);
    }

    if (config_.adaptive) {
        const auto action = adjust_declustering(states, config_.epochs.beta);
        if (record_) {
            record_->add({cycle_, fmt::format("decluster_{}", decluster_name(action)), std::nullopt, std::nullopt,
                          std::nullopt, 0, 0});
        }
        if (action == DeclusterAction::decrease && active_.size() > 1) {
            decrease(states, moves);
        } else if (action == DeclusterAction::increase) {
            increase();
        }
    }

    if (!buffer_.mapping_consistent(active_)) {
        throw std::logic_error("group mapping inconsistent after reorganization");
    }
    recompute_subgroups();
    for (const auto id : active_) {
        transport_.send(
            make_message(MessageKind::ClockSync, kMasterNode, id, ClockSyncPayload{clock_.now()}.encode()));
    }
}

void Master::decrease(const std::vector<NodeState>& states, const std::vector<MoveInstruction>& moves) {
    std::set<NodeId> involved;
    for (const auto& m : moves) {
        involved.insert(m.supplier);
        involved.insert(m.consumer);
    }
    std::optional<NodeId> victim;
    for (auto it = states.rbegin(); it != states.rend() && !victim; ++it) {
        if (it->classification == Classification::consumer && !involved.contains(it->slave_id)) {
            victim = it->slave_id;
        }
    }
    for (auto it = states.rbegin(); it != states.rend() && !victim; ++it) {
        if (it->classification == Classification::consumer) {
            victim = it->slave_id;
        }
    }
    if (!victim) {
        // All neutral: retire the least loaded node, highest id on ties.
        const NodeState* least = nullptr;
        for (const auto& s : states) {
            if (!least || s.occupancy <= least->occupancy) {
                least = &s;
            }
        }
        victim = least->slave_id;
    }

    std::vector<NodeId> remaining;
    for (const auto id : active_) {
        if (id != *victim) {
            remaining.push_back(id);
        }
    }
    std::size_t next = 0;
    for (const auto g : buffer_.groups_of(*victim)) {
        execute_move({*victim, remaining[next++ % remaining.size()], g});
    }
    transport_.send(make_message(MessageKind::Deactivate, kMasterNode, *victim));
    active_.erase(*victim);
    if (record_) {
        record_->add({cycle_, "deactivate", *victim, std::nullopt, std::nullopt, 0, 0});
    }
}

void Master::increase() {
    for (NodeId id = 1; id <= config_.n_slaves; ++id) {
        if (!active_.contains(id)) {
            transport_.send(make_message(MessageKind::Activate, kMasterNode, id));
            active_.insert(id);
            if (record_) {
                record_->add({cycle_, "activate", id, std::nullopt, std::nullopt, 0, 0});
            }
            return;
        }
    }
    if (record_) {
        record_->add({cycle_, "increase_refused", std::nullopt, std::nullopt, std::nullopt, 0, 0});
    }
}

void Master::shutdown() {
    transport_.guard().begin_shutdown(cycle_);
    for (NodeId id = 1; id <= config_.n_slaves; ++id) {
        transport_.request(make_message(MessageKind::Shutdown, kMasterNode, id));
    }
    transport_.request(make_message(MessageKind::Shutdown, kMasterNode, config_.collector()));
    finished_ = true;
}

}// namespace wjoin
