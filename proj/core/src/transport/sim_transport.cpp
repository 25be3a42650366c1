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
#include <wjoin/transport/sim_transport.hpp>

#include <algorithm>
#include <fmt/format.h>

namespace wjoin {

void Transport::record(const EpochMessage& msg) {
    DeliveryRecord r;
    r.virtual_time = msg.delivered_at;
    r.kind = msg.kind;
    r.sender = msg.sender;
    r.receiver = msg.receiver;
    r.bytes = msg.payload.size();
    r.epoch = guard_.epoch();
    if (msg.kind == MessageKind::TupleBatch) {
        r.slot = guard_.slot();
    }
    log_.record(r);
}

void SimTransport::attach(NodeId node, MessageHandler& handler, NodeClock& clock, bool sink) {
    nodes_[node] = Endpoint{&handler, &clock, sink};
}

SimTransport::Endpoint& SimTransport::endpoint(NodeId node) {
    auto it = nodes_.find(node);
    if (it == nodes_.end()) {
        throw ProtocolFault(fmt::format("no node {} attached", node));
    }
    return it->second;
}

void SimTransport::send(EpochMessage msg) {
    guard_.check(msg);
    auto& from = endpoint(msg.sender);
    auto& to = endpoint(msg.receiver);
    const auto latency = link_.latency(msg.payload.size());
    msg.sent_at = from.clock->now();
    msg.delivered_at = msg.sent_at + latency;
    from.clock->charge_comm(latency);
    if (!to.sink) {
        to.clock->wait_until(msg.sent_at);
        to.clock->charge_comm(latency);
    }
    record(msg);
    if (to.handler->on_message(msg)) {
        throw ProtocolFault(fmt::format("unexpected reply to {}", kind_name(msg.kind)));
    }
}

EpochMessage SimTransport::request(EpochMessage msg) {
    guard_.check(msg);
    auto& from = endpoint(msg.sender);
    auto& to = endpoint(msg.receiver);

    const auto rendezvous = [&](EpochMessage& m) {
        const auto start = std::max(from.clock->now(), to.clock->now());
        from.clock->wait_until(start);
        to.clock->wait_until(start);
        const auto latency = link_.latency(m.payload.size());
        from.clock->charge_comm(latency);
        to.clock->charge_comm(latency);
        m.sent_at = start;
        m.delivered_at = start + latency;
        record(m);
    };

    rendezvous(msg);
    auto reply = to.handler->on_message(msg);
    if (!reply) {
        throw ProtocolFault(fmt::format("no reply to {} from node {}", kind_name(msg.kind), msg.receiver));
    }
    guard_.check(*reply);
    rendezvous(*reply);
    return std::move(*reply);
}

}// namespace wjoin
