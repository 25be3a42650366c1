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

#include <wjoin/transport/message.hpp>

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <ostream>
#include <vector>

namespace wjoin {

struct DeliveryRecord {
    SimTime virtual_time{0};
    MessageKind kind = MessageKind::Ack;
    NodeId sender = 0;
    NodeId receiver = 0;
    std::size_t bytes = 0;
    std::uint64_t epoch = 0;
    /// Distribution slot, for TupleBatch deliveries only.
    std::optional<std::uint32_t> slot;
    std::uint64_t seq = 0;
};

/// Transport delivery log. Written as CSV ordered by (virtual_time, sender, sequence).
class EventLog {
  public:
    void record(DeliveryRecord r);

    /// Records ordered for output.
    std::vector<DeliveryRecord> ordered() const;
    std::size_t size() const;

    static constexpr const char* kCsvHeader = "virtual_time,kind,sender,receiver,bytes,epoch,slot";

    void write_csv(std::ostream& out) const;
    void write_csv(const std::filesystem::path& path) const;

  private:
    mutable std::mutex mutex_;
    std::vector<DeliveryRecord> records_;
    std::uint64_t next_seq_ = 0;
};

}// namespace wjoin
