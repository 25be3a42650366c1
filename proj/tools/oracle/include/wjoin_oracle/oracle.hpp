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

#include <wjoin/metrics/join_result.hpp>
#include <wjoin/workload/feed.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace wjoin::oracle {

/// Identity of an output pair: sequence numbers of the S1 and S2 constituents.
struct PairId {
    std::uint64_t seq1 = 0;
    std::uint64_t seq2 = 0;

    friend auto operator<=>(const PairId&, const PairId&) = default;
};

/// Centralised sliding-window nested-loop join over the full arrival history. A pair joins when
/// the keys match and the older tuple's timestamp is no more than its own stream's window
/// before the newer one's. Sorted, without duplicates.
std::vector<PairId> brute_force_join(std::span<const Arrival> arrivals, std::int64_t w1_ms, std::int64_t w2_ms);

struct Comparison {
    std::size_t expected = 0;
    std::size_t actual = 0;
    std::size_t missing = 0;
    std::size_t unexpected = 0;
    std::size_t duplicates = 0;
    /// Results whose key or timestamps disagree with the arrivals they name.
    std::size_t corrupted = 0;

    bool equal() const { return missing == 0 && unexpected == 0 && duplicates == 0 && corrupted == 0; }
    std::string summary() const;
};

Comparison compare(std::span<const JoinResult> results, std::span<const PairId> expected,
                   std::span<const Arrival> arrivals);

}// namespace wjoin::oracle
