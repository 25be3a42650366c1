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
#include <wjoin/core/wire.hpp>
#include <wjoin/transport/message.hpp>

#include <fmt/format.h>

namespace wjoin {

std::string_view kind_name(MessageKind kind) {
    switch (kind) {
        case MessageKind::TupleBatch: return "TupleBatch";
        case MessageKind::LoadReport: return "LoadReport";
        case MessageKind::LoadRequest: return "LoadRequest";
        case MessageKind::MoveOut: return "MoveOut";
        case MessageKind::MoveIn: return "MoveIn";
        case MessageKind::StateTransfer: return "StateTransfer";
        case MessageKind::Ack: return "Ack";
        case MessageKind::ClockSync: return "ClockSync";
        case MessageKind::Activate: return "Activate";
        case MessageKind::Deactivate: return "Deactivate";
        case MessageKind::Shutdown: return "Shutdown";
        case MessageKind::ResultBatch: return "ResultBatch";
    }
    return "Unknown";
}

bool expects_reply(MessageKind kind) {
    switch (kind) {
        case MessageKind::LoadRequest:
        case MessageKind::MoveOut:
        case MessageKind::MoveIn:
        case MessageKind::StateTransfer:
        case MessageKind::Shutdown: return true;
        default: return false;
    }
}

std::vector<std::uint8_t> encode_frame(const EpochMessage& msg) {
    ByteWriter out(kFrameHeaderBytes + msg.payload.size());
    out.put_u8(static_cast<std::uint8_t>(msg.kind));
    out.put_u16(msg.sender);
    out.put_u16(msg.receiver);
    out.put_u32(static_cast<std::uint32_t>(msg.payload.size()));
    out.put_bytes(msg.payload);
    return std::move(out).take();
}

FrameHeader decode_frame_header(std::span<const std::uint8_t, kFrameHeaderBytes> header) {
    ByteReader in(header);
    const auto kind = in.get_u8();
    if (kind < static_cast<std::uint8_t>(MessageKind::TupleBatch) || kind > static_cast<std::uint8_t>(MessageKind::ResultBatch)) {
        throw ProtocolFault(fmt::format("unknown message kind {}", kind));
    }
    FrameHeader h{static_cast<MessageKind>(kind), in.get_u16(), in.get_u16(), in.get_u32()};
    if (h.length > kMaxFramePayload) {
        throw ProtocolFault(fmt::format("frame payload of {} bytes exceeds limit", h.length));
    }
    return h;
}

EpochMessage decode_frame(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kFrameHeaderBytes) {
        throw ProtocolFault("frame shorter than header");
    }
    const auto h = decode_frame_header(bytes.first<kFrameHeaderBytes>());
    if (bytes.size() - kFrameHeaderBytes != h.length) {
        throw ProtocolFault(fmt::format("frame length field {} does not match payload of {} bytes", h.length,
                                        bytes.size() - kFrameHeaderBytes));
    }
    EpochMessage msg;
    msg.kind = h.kind;
    msg.sender = h.sender;
    msg.receiver = h.receiver;
    msg.payload.assign(bytes.begin() + kFrameHeaderBytes, bytes.end());
    return msg;
}

}// namespace wjoin
