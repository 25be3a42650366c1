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

#include <wjoin/core/tuple.hpp>

#include <wjoin/core/errors.hpp>

#include <string>

namespace wjoin {

Tuple Tuple::make(StreamId stream, Timestamp ts, std::uint32_t key, std::uint64_t sequence) {
    Tuple t;
    t.stream = stream;
    t.timestamp = ts;
    t.join_key = key;
    for (int i = 0; i < 8; ++i) {
        t.payload[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(sequence >> (8 * i));
    }
    return t;
}

std::uint64_t Tuple::sequence() const {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
        v |= static_cast<std::uint64_t>(payload[static_cast<std::size_t>(i)]) << (8 * i);
    }
    return v;
}

void encode_tuple(const Tuple& t, ByteWriter& out) {
    out.put_u8(static_cast<std::uint8_t>(t.stream));
    out.put_u64(static_cast<std::uint64_t>(t.timestamp.count()));
    out.put_u32(t.join_key);
    out.put_bytes(t.payload);
}

Tuple decode_tuple(ByteReader& in) {
    Tuple t;
    auto stream = in.get_u8();
    if (stream != static_cast<std::uint8_t>(StreamId::S1) && stream != static_cast<std::uint8_t>(StreamId::S2)) {
        throw ProtocolFault("tuple: unknown stream id " + std::to_string(stream));
    }
    t.stream = static_cast<StreamId>(stream);
    t.timestamp = Timestamp(static_cast<Timestamp::rep>(in.get_u64()));
    t.join_key = in.get_u32();
    if (t.join_key > kMaxJoinKey) {
        throw ProtocolFault("tuple: join key out of domain");
    }
    auto payload = in.get_bytes(kPayloadBytes);
    std::copy(payload.begin(), payload.end(), t.payload.begin());
    return t;
}

void encode_tuples(std::span<const Tuple> tuples, ByteWriter& out) {
    for (const auto& t : tuples) {
        encode_tuple(t, out);
    }
}

std::vector<Tuple> decode_tuples(ByteReader& in, std::size_t count) {
    if (in.remaining() < count * kTupleWireBytes) {
        throw ProtocolFault("tuple run truncated");
    }
    std::vector<Tuple> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(decode_tuple(in));
    }
    return out;
}

}// namespace wjoin
