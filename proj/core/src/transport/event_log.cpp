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

#include <wjoin/transport/event_log.hpp>

#include <algorithm>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <fstream>
#include <stdexcept>

namespace wjoin {

void EventLog::record(DeliveryRecord r) {
    std::lock_guard lock(mutex_);
    r.seq = next_seq_++;
    records_.push_back(r);
}

std::vector<DeliveryRecord> EventLog::ordered() const {
    std::vector<DeliveryRecord> out;
    {
        std::lock_guard lock(mutex_);
        out = records_;
    }
    std::stable_sort(out.begin(), out.end(), [](const DeliveryRecord& a, const DeliveryRecord& b) {
        if (a.virtual_time != b.virtual_time) {
            return a.virtual_time < b.virtual_time;
        }
        if (a.sender != b.sender) {
            return a.sender < b.sender;
        }
        return a.seq < b.seq;
    });
    return out;
}

std::size_t EventLog::size() const {
    std::lock_guard lock(mutex_);
    return records_.size();
}

void EventLog::write_csv(std::ostream& out) const {
    out << kCsvHeader << '\n';
    for (const auto& r : ordered()) {
        const auto ns = r.virtual_time.count();
        fmt::print(out, "{}.{:09},{},{},{},{},{},{}\n", ns / 1'000'000'000, ns % 1'000'000'000, kind_name(r.kind),
                   r.sender, r.receiver, r.bytes, r.epoch, r.slot ? fmt::format("{}", *r.slot) : std::string());
    }
}

void EventLog::write_csv(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error(fmt::format("cannot write {}", path.string()));
    }
    write_csv(out);
}

}// namespace wjoin
