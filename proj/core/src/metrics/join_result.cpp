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

#include <wjoin/metrics/join_result.hpp>

#include <algorithm>

namespace wjoin {

JoinResult JoinResult::from_pair(const Tuple& a, const Tuple& b, Timestamp emit_time) {
    const Tuple& s1 = a.stream == StreamId::S1 ? a : b;
    const Tuple& s2 = a.stream == StreamId::S1 ? b : a;
    return JoinResult{s1.join_key, s1.timestamp, s2.timestamp, emit_time, s1.sequence(), s2.sequence()};
}

Timestamp production_delay(const JoinResult& r) { return r.emit_time - std::max(r.ts1, r.ts2); }

void encode_results(std::span<const JoinResult> results, ByteWriter& out) {
    out.put_u32(static_cast<std::uint32_t>(results.size()));
    for (const auto& r : results) {
        out.put_u32(r.key);
        out.put_u64(static_cast<std::uint64_t>(r.ts1.count()));
        out.put_u64(static_cast<std::uint64_t>(r.ts2.count()));
        out.put_u64(static_cast<std::uint64_t>(r.emit_time.count()));
        out.put_u64(r.seq1);
        out.put_u64(r.seq2);
    }
}

std::vector<JoinResult> decode_results(ByteReader& in) {
    const auto n = in.get_u32();
    std::vector<JoinResult> results;
    results.reserve(std::min<std::size_t>(n, in.remaining() / kResultWireBytes));
    for (std::uint32_t i = 0; i < n; ++i) {
        JoinResult r;
        r.key = in.get_u32();
        r.ts1 = Timestamp(static_cast<std::int64_t>(in.get_u64()));
        r.ts2 = Timestamp(static_cast<std::int64_t>(in.get_u64()));
        r.emit_time = Timestamp(static_cast<std::int64_t>(in.get_u64()));
        r.seq1 = in.get_u64();
        r.seq2 = in.get_u64();
        results.push_back(r);
    }
    return results;
}

}// namespace wjoin
