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
#include <optional>
#include <ostream>
#include <vector>

namespace wjoin {

/// Configuration columns that identify a run in results.csv.
struct RunKey {
    double lambda = 0.0;
    std::uint32_t n_slaves = 0;
    std::uint32_t n_g = 0;
    double t_d_sec = 0.0;
    bool tuning = true;
};

struct SpreadStats {
    SimTime sum{0};
    SimTime min{0};
    SimTime max{0};
};

struct IntervalMetrics {
    std::size_t index = 0;
    double start_sec = 0.0;
    double end_sec = 0.0;
    std::uint64_t results = 0;
    std::optional<double> avg_delay_ms;
    std::optional<std::int64_t> max_delay_ms;
    SpreadStats busy;
    SpreadStats idle;
    SpreadStats comm;
    /// Mean over slaves of busy time per distribution epoch, in milliseconds.
    double busy_per_epoch_ms = 0.0;
    std::uint64_t peak_window_bytes = 0;
    /// Largest per-stream master buffer observed in the interval.
    std::uint64_t master_peak_tuples = 0;
    std::uint64_t moves = 0;
    std::uint32_t active_slaves = 0;
    std::uint64_t overloads = 0;
};

struct RunMetrics {
    RunKey key;
    std::vector<IntervalMetrics> intervals;

    static const char* csv_header();
    void write_rows(std::ostream& out) const;
    void write_csv(const std::filesystem::path& path) const;
};

}// namespace wjoin
