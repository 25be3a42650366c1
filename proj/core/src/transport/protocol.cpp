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

#include <wjoin/core/wire.hpp>
#include <wjoin/transport/protocol.hpp>

namespace wjoin {

std::vector<std::uint8_t> TupleBatchPayload::encode() const {
    ByteWriter out(24 + tuples.size() * kTupleWireBytes);
    out.put_u64(epoch);
    out.put_u32(slot);
    out.put_u64(static_cast<std::uint64_t>(cut.count()));
    out.put_u32(static_cast<std::uint32_t>(tuples.size()));
    encode_tuples(tuples, out);
    return std::move(out).take();
}

TupleBatchPayload TupleBatchPayload::decode(std::span<const std::uint8_t> bytes) {
    ByteReader in(bytes);
    TupleBatchPayload p;
    p.epoch = in.get_u64();
    p.slot = in.get_u32();
    p.cut = Timestamp(static_cast<std::int64_t>(in.get_u64()));
    const auto n = in.get_u32();
    if (n > in.remaining() / kTupleWireBytes) {
        throw ProtocolFault("tuple batch: payload truncated");
    }
    p.tuples = decode_tuples(in, n);
    in.expect_done("tuple batch");
    return p;
}

std::vector<std::uint8_t> LoadRequestPayload::encode() const {
    ByteWriter out;
    out.put_u64(epoch);
    return std::move(out).take();
}

LoadRequestPayload LoadRequestPayload::decode(std::span<const std::uint8_t> bytes) {
    ByteReader in(bytes);
    LoadRequestPayload p{in.get_u64()};
    in.expect_done("load request");
    return p;
}

std::vector<std::uint8_t> LoadReportPayload::encode() const {
    ByteWriter out;
    out.put_f64(occupancy);
    out.put_u64(samples);
    out.put_u64(overloads);
    return std::move(out).take();
}

LoadReportPayload LoadReportPayload::decode(std::span<const std::uint8_t> bytes) {
    ByteReader in(bytes);
    LoadReportPayload p;
    p.occupancy = in.get_f64();
    p.samples = in.get_u64();
    p.overloads = in.get_u64();
    in.expect_done("load report");
    if (!(p.occupancy >= 0.0 && p.occupancy <= 1.0)) {
        throw ProtocolFault("load report occupancy outside [0, 1]");
    }
    return p;
}

std::vector<std::uint8_t> MoveInstruction::encode() const {
    ByteWriter out;
    out.put_u16(supplier);
    out.put_u16(consumer);
    out.put_u32(group);
    return std::move(out).take();
}

MoveInstruction MoveInstruction::decode(std::span<const std::uint8_t> bytes) {
    ByteReader in(bytes);
    MoveInstruction m;
    m.supplier = in.get_u16();
    m.consumer = in.get_u16();
    m.group = in.get_u32();
    in.expect_done("move instruction");
    return m;
}

std::vector<std::uint8_t> AckPayload::encode() const {
    ByteWriter out;
    out.put_u8(static_cast<std::uint8_t>(acked));
    out.put_u32(group);
    return std::move(out).take();
}

AckPayload AckPayload::decode(std::span<const std::uint8_t> bytes) {
    ByteReader in(bytes);
    AckPayload a;
    a.acked = static_cast<MessageKind>(in.get_u8());
    a.group = in.get_u32();
    in.expect_done("ack");
    return a;
}

std::vector<std::uint8_t> ClockSyncPayload::encode() const {
    ByteWriter out;
    out.put_u64(static_cast<std::uint64_t>(master_time.count()));
    return std::move(out).take();
}

ClockSyncPayload ClockSyncPayload::decode(std::span<const std::uint8_t> bytes) {
    ByteReader in(bytes);
    ClockSyncPayload c{SimTime(static_cast<std::int64_t>(in.get_u64()))};
    in.expect_done("clock sync");
    return c;
}

std::vector<std::uint8_t> ResultBatchPayload::encode() const {
    ByteWriter out(4 + results.size() * kResultWireBytes);
    encode_results(results, out);
    return std::move(out).take();
}

ResultBatchPayload ResultBatchPayload::decode(std::span<const std::uint8_t> bytes) {
    ByteReader in(bytes);
    ResultBatchPayload p{decode_results(in)};
    in.expect_done("result batch");
    return p;
}

EpochMessage make_message(MessageKind kind, NodeId sender, NodeId receiver, std::vector<std::uint8_t> payload) {
    EpochMessage m;
    m.kind = kind;
    m.sender = sender;
    m.receiver = receiver;
    m.payload = std::move(payload);
    return m;
}

}// namespace wjoin
