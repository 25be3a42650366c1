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

#include <wjoin/transport/event_log.hpp>
#include <wjoin/transport/message.hpp>
#include <wjoin/transport/slot_guard.hpp>

#include <optional>

namespace wjoin {

/// Simulated link: base latency plus serialization time of the payload.
struct LinkModel {
    SimTime base_latency{100'000};
    double bandwidth_bytes_per_sec = 125e6;

    SimTime latency(std::size_t payload_bytes) const {
        return base_latency + seconds(static_cast<double>(payload_bytes) / bandwidth_bytes_per_sec);
    }
};

class MessageHandler {
  public:
    virtual ~MessageHandler() = default;

    /// Handles one delivered message. Request kinds (see expects_reply) must return a reply.
    virtual std::optional<EpochMessage> on_message(const EpochMessage& msg) = 0;
};

class Transport {
  public:
    Transport(SlotGuard& guard, EventLog& log) : guard_(guard), log_(log) {}
    virtual ~Transport() = default;

    /// One-way send; returns once the receiver has accepted the message.
    virtual void send(EpochMessage msg) = 0;

    /// Sends and blocks for the receiver's reply.
    virtual EpochMessage request(EpochMessage msg) = 0;

    SlotGuard& guard() { return guard_; }
    EventLog& log() { return log_; }

  protected:
    void record(const EpochMessage& msg);

    SlotGuard& guard_;
    EventLog& log_;
};

}// namespace wjoin
