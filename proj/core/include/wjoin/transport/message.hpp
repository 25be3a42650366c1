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

#include <wjoin/core/types.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace wjoin {

enum class MessageKind : std::uint8_t {
    TupleBatch = 1,
    LoadReport = 2,
    LoadRequest = 3,
    MoveOut = 4,
    MoveIn = 5,
    StateTransfer = 6,
    Ack = 7,
    ClockSync = 8,
    Activate = 9,
    Deactivate = 10,
    Shutdown = 11,
    /// Join output forwarded from a slave to the collector.
    ResultBatch = 12,
};

std::string_view kind_name(MessageKind kind);

/// Kinds whose sender blocks for a reply message (everything else is a one-way send).
bool expects_reply(MessageKind kind);

struct EpochMessage {
    MessageKind kind = MessageKind::Ack;
    NodeId sender = 0;
    NodeId receiver = 0;
    std::vector<std::uint8_t> payload;
    SimTime sent_at{0};
    SimTime delivered_at{0};
};

inline constexpr std::size_t kFrameHeaderBytes = 9;
inline constexpr std::uint32_t kMaxFramePayload = 1u << 30;

/// Frame: 1 byte kind, 2 bytes sender, 2 bytes receiver, 4 bytes payload length (LE), payload.
std::vector<std::uint8_t> encode_frame(const EpochMessage& msg);

/// Decodes exactly one frame; the length field must match the bytes supplied.
EpochMessage decode_frame(std::span<const std::uint8_t> bytes);

struct FrameHeader {
    MessageKind kind;
    NodeId sender;
    NodeId receiver;
    std::uint32_t length;
};

FrameHeader decode_frame_header(std::span<const std::uint8_t, kFrameHeaderBytes> header);

}// namespace wjoin
