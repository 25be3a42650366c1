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
#include <wjoin/workload/feed.hpp>

#include <fmt/format.h>

namespace wjoin {

SyntheticFeed::SyntheticFeed(const WorkloadConfig& config, SimTime end)
    : s1_(StreamId::S1, config.lambda1, config), s2_(StreamId::S2, config.lambda2, config), end_(end) {
    config.validate();
}

void SyntheticFeed::fill() {
    if (head_) {
        return;
    }
    auto& gen = s1_.next_time() <= s2_.next_time() ? s1_ : s2_;
    const auto at = gen.next_time();
    if (at >= end_) {
        return;
    }
    const auto key = gen.take_key();
    head_ = Arrival{at, Tuple::make(gen.stream(), to_timestamp(at), key, sequence_++)};
}

const Arrival* SyntheticFeed::peek() {
    fill();
    return head_ ? &*head_ : nullptr;
}

void SyntheticFeed::pop() {
    fill();
    head_.reset();
}

std::vector<Arrival> drain_source(ArrivalSource& source) {
    std::vector<Arrival> out;
    while (const auto* a = source.peek()) {
        out.push_back(*a);
        source.pop();
    }
    return out;
}

void write_trace(const std::filesystem::path& path, std::span<const Arrival> arrivals) {
    ByteWriter w(arrivals.size() * (8 + kTupleWireBytes));
    for (const auto& a : arrivals) {
        w.put_u64(static_cast<std::uint64_t>(a.at.count()));
        encode_tuple(a.tuple, w);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error(fmt::format("cannot write trace {}", path.string()));
    }
    out.write(reinterpret_cast<const char*>(w.bytes().data()), static_cast<std::streamsize>(w.size()));
}

std::vector<Arrival> read_trace(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error(fmt::format("cannot read trace {}", path.string()));
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() % (8 + kTupleWireBytes) != 0) {
        throw ProtocolFault("trace length is not a whole number of records");
    }
    ByteReader r(bytes);
    std::vector<Arrival> out;
    out.reserve(bytes.size() / (8 + kTupleWireBytes));
    while (!r.done()) {
        Arrival a;
        a.at = SimTime(static_cast<std::int64_t>(r.get_u64()));
        a.tuple = decode_tuple(r);
        if (!out.empty() && a.at < out.back().at) {
            throw ProtocolFault("trace arrivals out of order");
        }
        out.push_back(a);
    }
    return out;
}

}// namespace wjoin
