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
#include <wjoin/engine/state_transfer.hpp>

namespace wjoin {

std::size_t StateTransfer::tuple_count() const {
    std::size_t n = 0;
    for (const auto& b : buckets) {
        n += b.tuples.size();
    }
    return n;
}

std::vector<std::uint8_t> StateTransfer::encode() const {
    ByteWriter out(16 + buckets.size() * 7 + (tuple_count() + pending.size()) * kTupleWireBytes);
    out.put_u32(group);
    out.put_u8(static_cast<std::uint8_t>(global_depth));
    out.put_u16(static_cast<std::uint16_t>(buckets.size()));
    for (const auto& b : buckets) {
        out.put_u8(static_cast<std::uint8_t>(b.layout.local_depth));
        out.put_u16(static_cast<std::uint16_t>(b.layout.first_slot));
        out.put_u32(static_cast<std::uint32_t>(b.tuples.size()));
    }
    for (const auto& b : buckets) {
        encode_tuples(b.tuples, out);
    }
    out.put_u32(static_cast<std::uint32_t>(pending.size()));
    encode_tuples(pending, out);
    return std::move(out).take();
}

StateTransfer StateTransfer::decode(std::span<const std::uint8_t> bytes) {
    ByteReader in(bytes);
    StateTransfer st;
    st.group = in.get_u32();
    st.global_depth = in.get_u8();
    const auto n_buckets = in.get_u16();
    if (n_buckets == 0) {
        throw ProtocolFault("state transfer without buckets");
    }
    std::vector<std::uint32_t> counts;
    st.buckets.resize(n_buckets);
    for (auto& b : st.buckets) {
        b.layout.local_depth = in.get_u8();
        b.layout.first_slot = in.get_u16();
        counts.push_back(in.get_u32());
    }
    for (std::size_t i = 0; i < st.buckets.size(); ++i) {
        if (counts[i] > in.remaining() / kTupleWireBytes) {
            throw ProtocolFault("state transfer: payload truncated");
        }
        st.buckets[i].tuples = decode_tuples(in, counts[i]);
    }
    const auto n_pending = in.get_u32();
    if (n_pending > in.remaining() / kTupleWireBytes) {
        throw ProtocolFault("state transfer: payload truncated");
    }
    st.pending = decode_tuples(in, n_pending);
    in.expect_done("state transfer");
    return st;
}

}// namespace wjoin
