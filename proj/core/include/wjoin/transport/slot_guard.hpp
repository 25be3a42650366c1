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

#include <wjoin/transport/message.hpp>

#include <cstdint>
#include <mutex>
#include <optional>
#include <vector>

namespace wjoin {

enum class CommPhase { setup, slot, reorganization, shutdown };

/// Enforces the fixed communication schedule. Any message outside it raises SlotViolation.
///
/// During a slot only the master may send TupleBatch messages, only to that slot's members, at
/// most one each and in ascending node id. Control messages from the master and slave-to-slave
/// state transfers are legal only while a reorganization is open; Shutdown only in the shutdown
/// phase. Replies and result forwarding to the collector are always legal.
class SlotGuard {
  public:
    explicit SlotGuard(NodeId collector) : collector_(collector) {}

    void begin_slot(std::uint64_t epoch, std::uint32_t slot, std::vector<NodeId> members);
    void begin_reorganization(std::uint64_t epoch);
    void begin_shutdown(std::uint64_t epoch);

    void check(const EpochMessage& msg);

    std::uint64_t violations() const;
    std::uint64_t epoch() const;
    std::optional<std::uint32_t> slot() const;
    CommPhase phase() const;

  private:
    [[noreturn]] void violation(const EpochMessage& msg, const char* why);

    mutable std::mutex mutex_;
    NodeId collector_;
    CommPhase phase_ = CommPhase::setup;
    std::uint64_t epoch_ = 0;
    std::uint32_t slot_ = 0;
    std::vector<NodeId> members_;
    std::optional<NodeId> last_batch_receiver_;
    std::uint64_t violations_ = 0;
};

}// namespace wjoin
