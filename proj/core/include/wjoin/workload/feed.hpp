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

#include <wjoin/core/tuple.hpp>
#include <wjoin/workload/generator.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <vector>

namespace wjoin {

struct Arrival {
    SimTime at{0};
    Tuple tuple;

    friend bool operator==(const Arrival&, const Arrival&) = default;
};

/// Time-ordered source of arrivals for the master.
class ArrivalSource {
  public:
    virtual ~ArrivalSource() = default;
    /// Next arrival without consuming it; nullptr when exhausted.
    virtual const Arrival* peek() = 0;
    virtual void pop() = 0;
};

/// Merges the two synthetic streams by arrival time (ties go to S1) and stops at `end`.
/// Every tuple carries a run-wide sequence number in arrival order.
class SyntheticFeed final : public ArrivalSource {
  public:
    SyntheticFeed(const WorkloadConfig& config, SimTime end);

    const Arrival* peek() override;
    void pop() override;

  private:
    void fill();

    StreamGenerator s1_;
    StreamGenerator s2_;
    SimTime end_;
    std::uint64_t sequence_ = 0;
    std::optional<Arrival> head_;
};

/// Replays a materialised arrival list.
class VectorSource final : public ArrivalSource {
  public:
    explicit VectorSource(std::vector<Arrival> arrivals) : arrivals_(std::move(arrivals)) {}

    const Arrival* peek() override { return pos_ < arrivals_.size() ? &arrivals_[pos_] : nullptr; }
    void pop() override { ++pos_; }

  private:
    std::vector<Arrival> arrivals_;
    std::size_t pos_ = 0;
};

std::vector<Arrival> drain_source(ArrivalSource& source);

/// Trace file: per arrival, 8 bytes arrival time in ns (LE) followed by the 64-byte tuple record.
void write_trace(const std::filesystem::path& path, std::span<const Arrival> arrivals);
std::vector<Arrival> read_trace(const std::filesystem::path& path);

}// namespace wjoin
