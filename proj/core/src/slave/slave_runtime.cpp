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
#include <wjoin/slave/slave_runtime.hpp>

#include <fmt/format.h>

namespace wjoin {

SlaveRuntime::SlaveRuntime(SlaveConfig config, Transport& transport, NodeClock& clock, RunRecord* record)
    : config_(std::move(config)), transport_(transport), clock_(clock), record_(record), engine_(config_.engine) {
    stats_.peak_window_bytes.assign(config_.grid.count, 0);
    stats_.overloads_per_interval.assign(config_.grid.count, 0);
}

WorkMeter SlaveRuntime::make_meter() const {
    if (clock_.is_virtual()) {
        return WorkMeter(clock_.now(), config_.cost);
    }
    return WorkMeter([this] { return clock_.now(); });
}

void SlaveRuntime::forward(std::vector<JoinResult> results) {
    if (results.empty()) {
        return;
    }
    stats_.results += results.size();
    transport_.send(make_message(MessageKind::ResultBatch, config_.id, config_.collector,
                                 ResultBatchPayload{std::move(results)}.encode()));
}

std::vector<JoinResult> SlaveRuntime::on_distribution(const TupleBatchPayload& batch, SimTime delivered_at) {
    epoch_ = batch.epoch;
    const auto overloads_before = engine_.buffer().overload_events();
    engine_.ingest_batch(batch.tuples, batch.epoch, config_.ingest_mode, delivered_at);
    const auto occupancy = engine_.buffer().samples().back().fill;
    const auto queued = engine_.buffer().size_tuples();

    auto meter = make_meter();
    std::vector<JoinResult> results;
    const auto append = [&](std::vector<JoinResult>&& part) {
        results.insert(results.end(), part.begin(), part.end());
    };
    for (const auto g : engine_.groups()) {
        append(engine_.process_pending(g, meter));
        append(engine_.expire_blocks(g, batch.cut, meter));
        if (config_.tuning) {
            const auto report = engine_.tune_partitions(g, meter);
            stats_.splits += report.splits;
            stats_.merges += report.merges;
            stats_.refused_splits += report.refused_splits;
            for (const auto& f : report.flags) {
                if (f.reason == BucketFlagReason::unjustified) {
                    ++stats_.unjustified_buckets;
                }
            }
            if (report.refused_splits > 0 && record_) {
                record_->add({batch.epoch, "split_refused", config_.id, g, std::nullopt, 0, 0});
            }
        }
    }
    clock_.charge_busy(meter.charged());
    engine_.buffer().retire(clock_.now(), queued - engine_.buffer().size_tuples());

    ++stats_.batches;
    if (const auto i = config_.grid.index(clock_.now()); i >= 0) {
        auto& peak = stats_.peak_window_bytes[static_cast<std::size_t>(i)];
        peak = std::max<std::uint64_t>(peak, engine_.window_bytes());
        stats_.overloads_per_interval[static_cast<std::size_t>(i)] +=
            engine_.buffer().overload_events() - overloads_before;
    }
    std::int64_t delay_sum = 0;
    for (const auto& r : results) {
        delay_sum += production_delay(r).count();
    }
    if (record_) {
        record_->add({batch.epoch, "batch", config_.id, std::nullopt, occupancy,
                      batch.tuples.size() * kTupleWireBytes, delay_sum});
    }
    forward(results);
    return results;
}

LoadReportPayload SlaveRuntime::report_load() {
    const auto samples = engine_.buffer().take_samples();
    LoadReportPayload report;
    report.samples = samples.size();
    report.overloads = engine_.buffer().overload_events();
    if (!samples.empty()) {
        double sum = 0.0;
        for (const auto& s : samples) {
            sum += s.fill;
        }
        report.occupancy = sum / static_cast<double>(samples.size());
    }
    if (load_script_) {
        if (const auto scripted = load_script_(epoch_, config_.id)) {
            report.occupancy = *scripted;
        }
    }
    if (record_) {
        record_->add({epoch_, "load_report", config_.id, std::nullopt, report.occupancy, 0, 0});
    }
    return report;
}

void SlaveRuntime::on_move_out(const MoveInstruction& move) {
    if (move.supplier != config_.id) {
        throw ProtocolFault(fmt::format("move-out for supplier {} delivered to {}", move.supplier, config_.id));
    }
    auto meter = make_meter();
    forward(engine_.flush_fresh(move.group, meter));
    auto state = engine_.extract_state(move.group);
    meter.add_tuples(state.tuple_count());
    clock_.charge_busy(meter.charged());
    if (record_) {
        record_->add({epoch_, "move_out", config_.id, move.group, std::nullopt, state.tuple_count() * kTupleWireBytes, 0});
    }
    const auto ack = transport_.request(make_message(MessageKind::StateTransfer, config_.id, move.consumer, state.encode()));
    if (ack.kind != MessageKind::Ack || AckPayload::decode(ack.payload).group != move.group) {
        throw ProtocolFault(fmt::format("consumer {} did not confirm group {}", move.consumer, move.group));
    }
}

void SlaveRuntime::expect_move_in(const MoveInstruction& move) {
    if (move.consumer != config_.id) {
        throw ProtocolFault(fmt::format("move-in for consumer {} delivered to {}", move.consumer, config_.id));
    }
    if (engine_.owns(move.group)) {
        throw ProtocolFault(fmt::format("move-in of group {} which is already owned", move.group));
    }
    expected_.insert(move.group);
}

void SlaveRuntime::on_state_transfer(const StateTransfer& state) {
    if (!expected_.erase(state.group)) {
        throw ProtocolFault(fmt::format("unexpected state transfer for group {}", state.group));
    }
    auto meter = make_meter();
    engine_.install_state(state);
    meter.add_tuples(state.tuple_count());
    clock_.charge_busy(meter.charged());
    if (record_) {
        record_->add({epoch_, "move_in", config_.id, state.group, std::nullopt, state.tuple_count() * kTupleWireBytes, 0});
    }
}

std::optional<EpochMessage> SlaveRuntime::on_message(const EpochMessage& msg) {
    const auto ack = [&](MessageKind kind, GroupId group) {
        return make_message(MessageKind::Ack, config_.id, msg.sender, AckPayload{kind, group}.encode());
    };
    switch (msg.kind) {
        case MessageKind::TupleBatch:
            if (!active_) {
                throw ProtocolFault(fmt::format("tuple batch for inactive slave {}", config_.id));
            }
            on_distribution(TupleBatchPayload::decode(msg.payload), msg.delivered_at);
            return std::nullopt;
        case MessageKind::LoadRequest:
            epoch_ = LoadRequestPayload::decode(msg.payload).epoch;
            return make_message(MessageKind::LoadReport, config_.id, msg.sender, report_load().encode());
        case MessageKind::MoveIn: {
            const auto move = MoveInstruction::decode(msg.payload);
            expect_move_in(move);
            return ack(MessageKind::MoveIn, move.group);
        }
        case MessageKind::MoveOut: {
            const auto move = MoveInstruction::decode(msg.payload);
            on_move_out(move);
            return ack(MessageKind::MoveOut, move.group);
        }
        case MessageKind::StateTransfer: {
            const auto state = StateTransfer::decode(msg.payload);
            on_state_transfer(state);
            return ack(MessageKind::StateTransfer, state.group);
        }
        case MessageKind::ClockSync: clock_.adopt(ClockSyncPayload::decode(msg.payload).master_time); return std::nullopt;
        case MessageKind::Activate: active_ = true; return std::nullopt;
        case MessageKind::Deactivate:
            if (!engine_.groups().empty()) {
                throw ProtocolFault(fmt::format("deactivate for slave {} which still owns groups", config_.id));
            }
            active_ = false;
            return std::nullopt;
        case MessageKind::Shutdown: shut_down_ = true; return ack(MessageKind::Shutdown, 0);
        default: throw ProtocolFault(fmt::format("slave cannot handle {}", kind_name(msg.kind)));
    }
}

}// namespace wjoin
