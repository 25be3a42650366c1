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

#include <atomic>
#include <chrono>
#include <map>
#include <mutex>

namespace wjoin {

/// Node id to localhost port map shared by the nodes of one socket cluster.
class SocketDirectory {
  public:
    void publish(NodeId node, std::uint16_t port);
    std::uint16_t port(NodeId node) const;

  private:
    mutable std::mutex mutex_;
    std::map<NodeId, std::uint16_t> ports_;
};

/// TCP transport for one node. Connections are opened on first use and kept open.
///
/// A one-way send completes when the receiver has read the frame and answered with a receipt;
/// a request completes when the receiver's handler has produced its reply. A node that receives
/// messages runs `serve`, which handles one frame at a time until Shutdown or `stop`.
class SocketTransport final : public Transport {
  public:
    SocketTransport(NodeId self, NodeClock& clock, SocketDirectory& directory, SlotGuard& guard, EventLog& log,
                    std::chrono::milliseconds timeout = std::chrono::milliseconds(30'000));
    ~SocketTransport() override;

    SocketTransport(const SocketTransport&) = delete;
    SocketTransport& operator=(const SocketTransport&) = delete;

    /// Binds an ephemeral port on 127.0.0.1 and publishes it in the directory.
    void listen();

    void serve(MessageHandler& handler);
    void stop() { stopping_ = true; }

    void send(EpochMessage msg) override;
    EpochMessage request(EpochMessage msg) override;

    NodeId self() const { return self_; }

  private:
    int connection(NodeId peer);
    EpochMessage exchange(EpochMessage& msg);

    NodeId self_;
    NodeClock& clock_;
    SocketDirectory& directory_;
    std::chrono::milliseconds timeout_;
    int listen_fd_ = -1;
    std::map<NodeId, int> outbound_;
    std::atomic<bool> stopping_{false};
};

}// namespace wjoin
