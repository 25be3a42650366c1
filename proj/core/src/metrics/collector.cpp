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
#include <wjoin/metrics/collector.hpp>
#include <wjoin/transport/protocol.hpp>

#include <fmt/format.h>

namespace wjoin {

Collector::Collector(NodeId self, IntervalGrid grid, bool retain_results)
    : self_(self), grid_(grid), retain_(retain_results), intervals_(grid.count) {}

std::optional<EpochMessage> Collector::on_message(const EpochMessage& msg) {
    switch (msg.kind) {
        case MessageKind::ResultBatch: add(ResultBatchPayload::decode(msg.payload).results); return std::nullopt;
        case MessageKind::Shutdown:
            shut_down_ = true;
            return make_message(MessageKind::Ack, self_, msg.sender, AckPayload{MessageKind::Shutdown, 0}.encode());
        default: throw ProtocolFault(fmt::format("collector cannot handle {}", kind_name(msg.kind)));
    }
}

void Collector::add(std::span<const JoinResult> results) {
    for (const auto& r : results) {
        ++total_;
        const auto delay = production_delay(r);
        if (delay < Timestamp{0}) {
            ++negative_;
        }
        const auto i = grid_.index(to_sim_time(r.emit_time));
        if (i >= 0) {
            auto& s = intervals_[static_cast<std::size_t>(i)];
            ++s.count;
            s.sum_ms += delay.count();
            s.max = std::max(s.max, delay);
        }
        if (retain_) {
            retained_.push_back(r);
        }
    }
}

}// namespace wjoin
