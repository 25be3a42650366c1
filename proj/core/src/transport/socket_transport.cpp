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
#include <wjoin/transport/protocol.hpp>
#include <wjoin/transport/socket_transport.hpp>

#include <arpa/inet.h>
#include <cerrno>
#include <cstring>
#include <fmt/format.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>
#include <vector>

namespace wjoin {

namespace {

using Clock = std::chrono::steady_clock;

[[noreturn]] void sys_fault(const char* what) { throw ProtocolFault(fmt::format("{}: {}", what, std::strerror(errno))); }

int remaining_ms(Clock::time_point deadline) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
    return left < 0 ? 0 : static_cast<int>(left);
}

/// Returns false on orderly close before the first byte.
bool read_full(int fd, std::uint8_t* buf, std::size_t n, Clock::time_point deadline) {
    std::size_t got = 0;
    while (got < n) {
        pollfd p{fd, POLLIN, 0};
        const int ready = ::poll(&p, 1, remaining_ms(deadline));
        if (ready == 0) {
            throw ProtocolFault("timed out waiting for peer");
        }
        if (ready < 0) {
            if (errno == EINTR) {
                continue;
            }
            sys_fault("poll");
        }
        const auto r = ::recv(fd, buf + got, n - got, 0);
        if (r == 0) {
            if (got == 0) {
                return false;
            }
            throw ProtocolFault("connection closed mid-frame");
        }
        if (r < 0) {
            if (errno == EINTR) {
                continue;
            }
            sys_fault("recv");
        }
        got += static_cast<std::size_t>(r);
    }
    return true;
}

void write_full(int fd, const std::vector<std::uint8_t>& bytes) {
    std::size_t sent = 0;
    while (sent < bytes.size()) {
        const auto r = ::send(fd, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
        if (r < 0) {
            if (errno == EINTR) {
                continue;
            }
            sys_fault("send");
        }
        sent += static_cast<std::size_t>(r);
    }
}

std::optional<EpochMessage> read_frame(int fd, Clock::time_point deadline) {
    std::array<std::uint8_t, kFrameHeaderBytes> header{};
    if (!read_full(fd, header.data(), header.size(), deadline)) {
        return std::nullopt;
    }
    const auto h = decode_frame_header(header);
    std::vector<std::uint8_t> frame(kFrameHeaderBytes + h.length);
    std::memcpy(frame.data(), header.data(), header.size());
    if (h.length > 0 && !read_full(fd, frame.data() + kFrameHeaderBytes, h.length, deadline)) {
        throw ProtocolFault("connection closed mid-frame");
    }
    return decode_frame(frame);
}

}// namespace

void SocketDirectory::publish(NodeId node, std::uint16_t port) {
    std::lock_guard lock(mutex_);
    ports_[node] = port;
}

std::uint16_t SocketDirectory::port(NodeId node) const {
    std::lock_guard lock(mutex_);
    auto it = ports_.find(node);
    if (it == ports_.end()) {
        throw ProtocolFault(fmt::format("node {} has no published endpoint", node));
    }
    return it->second;
}

SocketTransport::SocketTransport(NodeId self, NodeClock& clock, SocketDirectory& directory, SlotGuard& guard,
                                 EventLog& log, std::chrono::milliseconds timeout)
    : Transport(guard, log), self_(self), clock_(clock), directory_(directory), timeout_(timeout) {}

SocketTransport::~SocketTransport() {
    for (auto& [_, fd] : outbound_) {
        ::close(fd);
    }
    if (listen_fd_ >= 0) {
        ::close(listen_fd_);
    }
}

void SocketTransport::listen() {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) {
        sys_fault("socket");
    }
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = 0;
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
        sys_fault("bind");
    }
    if (::listen(listen_fd_, 64) < 0) {
        sys_fault("listen");
    }
    socklen_t len = sizeof addr;
    if (::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len) < 0) {
        sys_fault("getsockname");
    }
    directory_.publish(self_, ntohs(addr.sin_port));
}

int SocketTransport::connection(NodeId peer) {
    if (auto it = outbound_.find(peer); it != outbound_.end()) {
        return it->second;
    }
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) {
        sys_fault("socket");
    }
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(directory_.port(peer));
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
        ::close(fd);
        sys_fault("connect");
    }
    outbound_[peer] = fd;
    return fd;
}

EpochMessage SocketTransport::exchange(EpochMessage& msg) {
    guard_.check(msg);
    const int fd = connection(msg.receiver);
    const auto wall_start = Clock::now();
    const auto virt_start = clock_.now();
    msg.sent_at = virt_start;
    write_full(fd, encode_frame(msg));
    auto reply = read_frame(fd, wall_start + timeout_);
    if (!reply) {
        throw ProtocolFault(fmt::format("node {} closed the connection", msg.receiver));
    }
    reply->delivered_at = clock_.now();
    clock_.charge_comm(reply->delivered_at - virt_start);
    return std::move(*reply);
}

void SocketTransport::send(EpochMessage msg) {
    auto receipt = exchange(msg);
    if (receipt.kind != MessageKind::Ack) {
        throw ProtocolFault(fmt::format("expected a receipt for {}", kind_name(msg.kind)));
    }
}

EpochMessage SocketTransport::request(EpochMessage msg) {
    auto reply = exchange(msg);
    guard_.check(reply);
    record(reply);
    return reply;
}

void SocketTransport::serve(MessageHandler& handler) {
    std::vector<pollfd> fds{{listen_fd_, POLLIN, 0}};
    bool shutdown = false;
    while (!shutdown && !stopping_) {
        const int ready = ::poll(fds.data(), fds.size(), 50);
        if (ready < 0) {
            if (errno == EINTR) {
                continue;
            }
            sys_fault("poll");
        }
        if (ready == 0) {
            continue;
        }
        if (fds[0].revents & POLLIN) {
            const int fd = ::accept(listen_fd_, nullptr, nullptr);
            if (fd < 0) {
                sys_fault("accept");
            }
            const int one = 1;
            ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
            fds.push_back({fd, POLLIN, 0});
        }
        for (std::size_t i = 1; i < fds.size() && !shutdown; ++i) {
            if (!(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) {
                continue;
            }
            fds[i].revents = 0;
            auto msg = read_frame(fds[i].fd, Clock::now() + timeout_);
            if (!msg) {
                ::close(fds[i].fd);
                fds[i].fd = -1;
                continue;
            }
            const auto received = clock_.now();
            msg->delivered_at = received;
            record(*msg);
            if (!expects_reply(msg->kind)) {
                write_full(fds[i].fd, encode_frame(make_message(MessageKind::Ack, self_, msg->sender)));
                clock_.charge_comm(clock_.now() - received);
                if (handler.on_message(*msg)) {
                    throw ProtocolFault(fmt::format("unexpected reply to {}", kind_name(msg->kind)));
                }
                continue;
            }
            auto reply = handler.on_message(*msg);
            if (!reply) {
                throw ProtocolFault(fmt::format("no reply produced for {}", kind_name(msg->kind)));
            }
            reply->sent_at = clock_.now();
            write_full(fds[i].fd, encode_frame(*reply));
            shutdown = msg->kind == MessageKind::Shutdown;
        }
        std::erase_if(fds, [](const pollfd& p) { return p.fd < 0; });
    }
    for (std::size_t i = 1; i < fds.size(); ++i) {
        ::close(fds[i].fd);
    }
}

}// namespace wjoin
