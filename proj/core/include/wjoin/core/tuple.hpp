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
#include <wjoin/core/wire.hpp>

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace wjoin {

inline constexpr std::size_t kTupleWireBytes = 64;
inline constexpr std::size_t kPayloadBytes = 51;

/// A timestamped stream record. The in-memory layout mirrors the 64-byte wire record.
///
/// The first eight payload bytes carry the generator's arrival sequence number, which gives
/// every tuple a run-wide identity; the remaining payload bytes are opaque padding.
struct Tuple {
    Timestamp timestamp{0};
    std::uint32_t join_key = 0;
    StreamId stream = StreamId::S1;
    std::array<std::uint8_t, kPayloadBytes> payload{};

    static Tuple make(StreamId stream, Timestamp ts, std::uint32_t key, std::uint64_t sequence);

    std::uint64_t sequence() const;

    friend bool operator==(const Tuple&, const Tuple&) = default;
};

static_assert(sizeof(Tuple) == kTupleWireBytes);

/// Wire record: 1 byte stream id, 8 bytes timestamp (LE), 4 bytes join key (LE), 51 bytes payload.
void encode_tuple(const Tuple& t, ByteWriter& out);
Tuple decode_tuple(ByteReader& in);

void encode_tuples(std::span<const Tuple> tuples, ByteWriter& out);
std::vector<Tuple> decode_tuples(ByteReader& in, std::size_t count);

}// namespace wjoin
