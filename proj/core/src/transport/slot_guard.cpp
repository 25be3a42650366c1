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
#include <wjoin/transport/slot_guard.hpp>

#include <algorithm>
#include <fmt/format.h>

namespace wjoin {

void SlotGuard::begin_slot(std::uint64_t epoch, std::uint32_t slot, std::vector<NodeId> members) {
    std::lock_guard lock(mutex_);
    phase_ = CommPhase::slot;
    epoch_ = epoch;
    slot_ = slot;
    std::sort(members.begin(), members.end());
    members_ = std::move(members);
    last_batch_receiver_.reset();
}

void SlotGuard::begin_reorganization(std::uint64_t epoch) {
    std::lock_guard lock(mutex_);
    phase_ = CommPhase::reorganization;
    epoch_ = epoch;
    members_.clear();
}

void SlotGuard::begin_shutdown(std::uint64_t epoch) {
    std::lock_guard lock(mutex_);
    phase_ = CommPhase::shutdown;
    epoch_ = epoch;
    members_.clear();
}

void SlotGuard::violation(const EpochMessage& msg, const char* why) {
    ++violations_;
    throw SlotViolation(fmt::format("{} from {} to {} in epoch {}: {}", kind_name(msg.kind), msg.sender, msg.receiver,
                                    epoch_, why));
}

void SlotGuard::check(const EpochMessage& msg) {
    std::lock_guard lock(mutex_);
    switch (msg.kind) {
        case MessageKind::LoadReport:
        case MessageKind::Ack: return;
        case MessageKind::ResultBatch:
            if (msg.receiver != collector_) {
                violation(msg, "results must go to the collector");
            }
            return;
        case MessageKind::TupleBatch:
            if (phase_ != CommPhase::slot) {
                violation(msg, "tuple batch outside a distribution slot");
            }
            if (msg.sender != 0) {
                violation(msg, "only the master distributes tuples");
            }
            if (!std::binary_search(members_.begin(), members_.end(), msg.receiver)) {
                violation(msg, "receiver is not a member of the current slot");
            }
            if (last_batch_receiver_ && msg.receiver <= *last_batch_receiver_) {
                violation(msg, "batches within a slot must go out in ascending node order");
            }
            last_batch_receiver_ = msg.receiver;
            return;
        case MessageKind::StateTransfer:
            if (phase_ != CommPhase::reorganization) {
                violation(msg, "state transfer outside reorganization");
            }
            if (msg.sender == 0 || msg.receiver == 0 || msg.receiver == collector_) {
                violation(msg, "state transfer must be slave to slave");
            }
            return;
        case MessageKind::Shutdown:
            if (phase_ != CommPhase::shutdown) {
                violation(msg, "shutdown before the shutdown phase");
            }
            return;
        case MessageKind::LoadRequest:
        case MessageKind::MoveOut:
        case MessageKind::MoveIn:
        case MessageKind::ClockSync:
        case MessageKind::Activate:
        case MessageKind::Deactivate:
            if (phase_ != CommPhase::reorganization) {
                violation(msg, "control message outside reorganization");
            }
            if (msg.sender != 0) {
                violation(msg, "control messages originate at the master");
            }
            return;
    }
    violation(msg, "unknown message kind");
}

std::uint64_t SlotGuard::violations() const {
    std::lock_guard lock(mutex_);
    return violations_;
}

std::uint64_t SlotGuard::epoch() const {
    std::lock_guard lock(mutex_);
    return epoch_;
}

std::optional<std::uint32_t> SlotGuard::slot() const {
    std::lock_guard lock(mutex_);
    if (phase_ != CommPhase::slot) {
        return std::nullopt;
    }
    return slot_;
}

CommPhase SlotGuard::phase() const {
    std::lock_guard lock(mutex_);
    return phase_;
}

}// namespace wjoin
