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

#include <wjoin/metrics/run_record.hpp>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <fstream>
#include <stdexcept>

namespace wjoin {

void RunRecord::add(RunRecordRow row) {
    std::lock_guard lock(mutex_);
    rows_.push_back(std::move(row));
}

std::vector<RunRecordRow> RunRecord::rows() const {
    std::lock_guard lock(mutex_);
    return rows_;
}

std::vector<RunRecordRow> RunRecord::rows_of(const std::string& event_type) const {
    std::lock_guard lock(mutex_);
    std::vector<RunRecordRow> out;
    for (const auto& r : rows_) {
        if (r.event_type == event_type) {
            out.push_back(r);
        }
    }
    return out;
}

void RunRecord::write_csv(std::ostream& out) const {
    out << kCsvHeader << '\n';
    for (const auto& r : rows()) {
        fmt::print(out, "{},{},{},{},{},{},{}\n", r.epoch_index, r.event_type,
                   r.slave_id ? fmt::format("{}", *r.slave_id) : std::string(),
                   r.group_id ? fmt::format("{}", *r.group_id) : std::string(),
                   r.occupancy ? fmt::format("{:.6f}", *r.occupancy) : std::string(), r.batch_bytes,
                   r.latency_accumulators);
    }
}

void RunRecord::write_csv(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error(fmt::format("cannot write {}", path.string()));
    }
    write_csv(out);
}

}// namespace wjoin
