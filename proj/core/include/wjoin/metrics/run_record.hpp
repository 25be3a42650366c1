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

#include <wjoin/core/types.hpp>

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace wjoin {

/// One line of the run record.
struct RunRecordRow {
    std::uint64_t epoch_index = 0;
    std::string event_type;
    std::optional<NodeId> slave_id;
    std::optional<GroupId> group_id;
    std::optional<double> occupancy;
    std::uint64_t batch_bytes = 0;
    /// Summed production delay (ms) of the results emitted by this event.
    std::int64_t latency_accumulators = 0;
};

/// Append-only log of master and slave events (batches, load reports, moves, declustering).
class RunRecord {
  public:
    void add(RunRecordRow row);

    std::vector<RunRecordRow> rows() const;
    std::vector<RunRecordRow> rows_of(const std::string& event_type) const;

    static constexpr const char* kCsvHeader =
        "epoch_index,event_type,slave_id,group_id,occupancy,batch_bytes,latency_accumulators";

    void write_csv(std::ostream& out) const;
    void write_csv(const std::filesystem::path& path) const;

  private:
    mutable std::mutex mutex_;
    std::vector<RunRecordRow> rows_;
};

}// namespace wjoin
