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

#include <wjoin/transport/clock.hpp>
#include <wjoin/transport/transport.hpp>

#include <map>

namespace wjoin {

/// In-process transport over simulated clocks. Handlers run inline on delivery.
///
/// A one-way send costs the link latency on both endpoints; the sender does not wait for a
/// busy receiver, whose receive is queued behind its current work. A request is a rendezvous:
/// both clocks first advance to the later of the two, then the request and the reply each
/// cost a link latency on both sides. Sinks (the collector) only charge the sender.
class SimTransport final : public Transport {
  public:
    SimTransport(LinkModel link, SlotGuard& guard, EventLog& log) : Transport(guard, log), link_(link) {}

    void attach(NodeId node, MessageHandler& handler, NodeClock& clock, bool sink = false);

    void send(EpochMessage msg) override;
    EpochMessage request(EpochMessage msg) override;

    const LinkModel& link() const { return link_; }

  private:
    struct Endpoint {
        MessageHandler* handler;
        NodeClock* clock;
        bool sink;
    };

    Endpoint& endpoint(NodeId node);

    LinkModel link_;
    std::map<NodeId, Endpoint> nodes_;
};

}// namespace wjoin
