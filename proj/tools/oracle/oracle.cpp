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

#include <wjoin_oracle/oracle.hpp>

#include <algorithm>
#include <fmt/format.h>
#include <unordered_map>

namespace wjoin::oracle {

std::vector<PairId> brute_force_join(std::span<const Arrival> arrivals, std::int64_t w1_ms, std::int64_t w2_ms) {
    // Bucketing by key only prunes pairs that could never match; every same-key pair is tested.
    std::unordered_map<std::uint32_t, std::vector<const Tuple*>> by_key;
    for (const auto& a : arrivals) {
        by_key[a.tuple.join_key].push_back(&a.tuple);
    }
    std::vector<PairId> out;
    for (const auto& [key, tuples] : by_key) {
        for (std::size_t i = 0; i < tuples.size(); ++i) {
            for (std::size_t j = i + 1; j < tuples.size(); ++j) {
                const Tuple& a = *tuples[i];
                const Tuple& b = *tuples[j];
                if (a.stream == b.stream) {
                    continue;
                }
                const Tuple& s1 = a.stream == StreamId::S1 ? a : b;
                const Tuple& s2 = a.stream == StreamId::S1 ? b : a;
                const auto t1 = s1.timestamp.count();
                const auto t2 = s2.timestamp.count();
                const bool in_window = t1 <= t2 ? t2 - t1 <= w1_ms : t1 - t2 <= w2_ms;
                if (in_window) {
                    out.push_back({s1.sequence(), s2.sequence()});
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string Comparison::summary() const {
    return fmt::format("expected {} actual {} missing {} unexpected {} duplicates {} corrupted {}", expected, actual,
                       missing, unexpected, duplicates, corrupted);
}

Comparison compare(std::span<const JoinResult> results, std::span<const PairId> expected,
                   std::span<const Arrival> arrivals) {
    std::unordered_map<std::uint64_t, const Tuple*> by_seq;
    for (const auto& a : arrivals) {
        by_seq[a.tuple.sequence()] = &a.tuple;
    }
    Comparison c;
    c.expected = expected.size();
    c.actual = results.size();
    std::vector<PairId> got;
    got.reserve(results.size());
    for (const auto& r : results) {
        got.push_back({r.seq1, r.seq2});
        const auto s1 = by_seq.find(r.seq1);
        const auto s2 = by_seq.find(r.seq2);
        if (s1 == by_seq.end() || s2 == by_seq.end() || s1->second->timestamp != r.ts1
            || s2->second->timestamp != r.ts2 || s1->second->join_key != r.key || s2->second->join_key != r.key) {
            ++c.corrupted;
        }
    }
    std::sort(got.begin(), got.end());
    const auto distinct_end = std::unique(got.begin(), got.end());
    c.duplicates = static_cast<std::size_t>(got.end() - distinct_end);
    got.erase(distinct_end, got.end());

    std::vector<PairId> diff;
    std::set_difference(expected.begin(), expected.end(), got.begin(), got.end(), std::back_inserter(diff));
    c.missing = diff.size();
    diff.clear();
    std::set_difference(got.begin(), got.end(), expected.begin(), expected.end(), std::back_inserter(diff));
    c.unexpected = diff.size();
    return c;
}

}// namespace wjoin::oracle
