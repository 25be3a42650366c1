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
#include <wjoin/core/wire.hpp>

#include <cstdint>
#include <span>
#include <vector>

namespace wjoin {

/// One output pair. ts1/seq1 always describe the S1 constituent.
struct JoinResult {
    std::uint32_t key = 0;
    Timestamp ts1{0};
    Timestamp ts2{0};
    Timestamp emit_time{0};
    std::uint64_t seq1 = 0;
    std::uint64_t seq2 = 0;

    static JoinResult from_pair(const Tuple& a, const Tuple& b, Timestamp emit_time);

    friend bool operator==(const JoinResult&, const JoinResult&) = default;
};

/// Emission time minus the timestamp of the more recent constituent.
Timestamp production_delay(const JoinResult& r);

inline constexpr std::size_t kResultWireBytes = 4 + 8 * 5;

void encode_results(std::span<const JoinResult> results, ByteWriter& out);
std::vector<JoinResult> decode_results(ByteReader& in);

}// namespace wjoin
