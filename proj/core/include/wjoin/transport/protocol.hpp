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
#include <wjoin/metrics/join_result.hpp>
#include <wjoin/transport/message.hpp>

#include <cstdint>
#include <vector>

namespace wjoin {

inline constexpr NodeId kMasterNode = 0;

struct TupleBatchPayload {
    std::uint64_t epoch = 0;
    std::uint32_t slot = 0;
    /// Master clock at the drain; no later batch carries an older tuple.
    Timestamp cut{0};
    std::vector<Tuple> tuples;

    std::vector<std::uint8_t> encode() const;
    static TupleBatchPayload decode(std::span<const std::uint8_t> bytes);
};

struct LoadRequestPayload {
    std::uint64_t epoch = 0;

    std::vector<std::uint8_t> encode() const;
    static LoadRequestPayload decode(std::span<const std::uint8_t> bytes);
};

struct LoadReportPayload {
    double occupancy = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t overloads = 0;

    std::vector<std::uint8_t> encode() const;
    static LoadReportPayload decode(std::span<const std::uint8_t> bytes);
};

/// Carried by both MoveOut (to the supplier) and MoveIn (to the consumer).
struct MoveInstruction {
    NodeId supplier = 0;
    NodeId consumer = 0;
    GroupId group = 0;

    std::vector<std::uint8_t> encode() const;
    static MoveInstruction decode(std::span<const std::uint8_t> bytes);

    friend bool operator==(const MoveInstruction&, const MoveInstruction&) = default;
};

struct AckPayload {
    MessageKind acked = MessageKind::Ack;
    GroupId group = 0;

    std::vector<std::uint8_t> encode() const;
    static AckPayload decode(std::span<const std::uint8_t> bytes);
};

struct ClockSyncPayload {
    SimTime master_time{0};

    std::vector<std::uint8_t> encode() const;
    static ClockSyncPayload decode(std::span<const std::uint8_t> bytes);
};

struct ResultBatchPayload {
    std::vector<JoinResult> results;

    std::vector<std::uint8_t> encode() const;
    static ResultBatchPayload decode(std::span<const std::uint8_t> bytes);
};

EpochMessage make_message(MessageKind kind, NodeId sender, NodeId receiver, std::vector<std::uint8_t> payload = {});

}// namespace wjoin
