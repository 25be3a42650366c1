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

#include <wjoin/engine/partition_group.hpp>

#include <stdexcept>

namespace wjoin {

namespace {

void emit_matches(std::span<const Tuple> probe, std::span<const Tuple> build, const WindowSpec& windows,
                  WorkMeter& meter, std::vector<std::pair<Tuple, Tuple>>& scratch) {
    meter.add_comparisons(static_cast<std::uint64_t>(probe.size()) * build.size());
    for (const auto& p : probe) {
        for (const auto& b : build) {
            if (p.join_key == b.join_key && joinable(p, b, windows)) {
                scratch.emplace_back(p, b);
            }
        }
    }
}

void flush_scratch(WorkMeter& meter, std::vector<JoinResult>& out, std::vector<std::pair<Tuple, Tuple>>& scratch) {
    const auto emit = meter.emit_timestamp();
    for (const auto& [a, b] : scratch) {
        out.push_back(JoinResult::from_pair(a, b, emit));
    }
    scratch.clear();
}

}// namespace

PartitionGroup::PartitionGroup(GroupId id, const EngineConfig& config)
    : id_(id), windows_(config.windows), block_tuples_(config.block_tuples()), theta_blocks_(config.theta_blocks),
      max_depth_(config.max_depth) {}

void PartitionGroup::join_pass(std::size_t bucket, StreamId stream, WorkMeter& meter, std::vector<JoinResult>& out) {
    auto& part = directory_.bucket(bucket);
    auto& head = part.window(stream).back();
    const auto& other = part.window(opposite(stream));
    std::vector<std::pair<Tuple, Tuple>> scratch;
    for (std::size_t i = 0; i < other.size(); ++i) {
        // The opposite head's fresh suffix has not probed yet; it will meet this block in its own pass.
        const auto build = i + 1 == other.size() ? other[i].established() : other[i].tuples();
        emit_matches(head.fresh(), build, windows_, meter, scratch);
    }
    flush_scratch(meter, out, scratch);
    head.settle();
}

void PartitionGroup::insert_and_join(std::span<const Tuple> arrivals, WorkMeter& meter,
                                     std::vector<JoinResult>& out) {
    for (const auto& t : arrivals) {
        const auto bucket = directory_.bucket_for_key(t.join_key);
        auto& window = directory_.bucket(bucket).window(t.stream);
        if (window.empty() || window.back().full()) {
            window.emplace_back(block_tuples_);
        }
        window.back().append(t);
        meter.add_tuples(1);
        if (window.back().full()) {
            join_pass(bucket, t.stream, meter, out);
        }
    }
    flush_fresh(meter, out);
}

void PartitionGroup::flush_fresh(WorkMeter& meter, std::vector<JoinResult>& out) {
    for (std::size_t b = 0; b < directory_.bucket_count(); ++b) {
        for (const auto s : {StreamId::S1, StreamId::S2}) {
            const auto& window = directory_.bucket(b).window(s);
            if (!window.empty() && window.back().fresh_count() > 0) {
                join_pass(b, s, meter, out);
            }
        }
    }
}

void PartitionGroup::expire(Timestamp now, WorkMeter& meter, std::vector<JoinResult>& out) {
    std::vector<std::pair<Tuple, Tuple>> scratch;
    for (std::size_t b = 0; b < directory_.bucket_count(); ++b) {
        for (const auto s : {StreamId::S1, StreamId::S2}) {
            auto& window = directory_.bucket(b).window(s);
            const auto horizon = now - windows_.for_stream(s);
            while (!window.empty() && window.front().newest() < horizon) {
                if (window.front().fresh_count() > 0) {
                    join_pass(b, s, meter, out);
                }
                // Fresh tuples on the other side would otherwise never see this block.
                const auto& other = directory_.bucket(b).window(opposite(s));
                if (!other.empty() && other.back().fresh_count() > 0) {
                    emit_matches(window.front().tuples(), other.back().fresh(), windows_, meter, scratch);
                    flush_scratch(meter, out, scratch);
                }
                window.pop_front();
            }
        }
    }
}

TuneReport PartitionGroup::tune(WorkMeter& meter) {
    TuneReport report;
    if (has_fresh()) {
        report.skipped = true;
        return report;
    }
    const auto moved_before = directory_.moved_tuples();
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t b = 0; b < directory_.bucket_count(); ++b) {
            const auto blocks = directory_.bucket(b).blocks();
            if (blocks > 2 * theta_blocks_) {
                if (directory_.split_bucket(b, max_depth_, block_tuples_) == SplitResult::split) {
                    ++report.splits;
                    changed = true;
                    break;
                }
            } else if (blocks < theta_blocks_ && directory_.merge_buddy(b, theta_blocks_, block_tuples_)) {
                ++report.merges;
                changed = true;
                break;
            }
        }
    }
    meter.add_tuples(directory_.moved_tuples() - moved_before);
    report.flags = certify();
    for (const auto& f : report.flags) {
        if (f.reason == BucketFlagReason::hot_key_at_max_depth) {
            ++report.refused_splits;
        }
    }
    return report;
}

std::vector<BucketFlag> PartitionGroup::certify() const {
    std::vector<BucketFlag> flags;
    const auto d = directory_.global_depth();
    for (std::size_t b = 0; b < directory_.bucket_count(); ++b) {
        const auto& part = directory_.bucket(b);
        const auto blocks = part.blocks();
        if (blocks > 2 * theta_blocks_) {
            const bool at_limit = d >= max_depth_ && part.local_depth == d;
            flags.push_back({b, at_limit ? BucketFlagReason::hot_key_at_max_depth : BucketFlagReason::unjustified,
                             blocks});
        } else if (blocks < theta_blocks_) {
            BucketFlagReason reason = BucketFlagReason::unjustified;
            if (part.local_depth == 0) {
                reason = BucketFlagReason::undersized_no_buddy;
            } else if (const auto buddy = directory_.buddy_of(b); !buddy) {
                reason = BucketFlagReason::undersized_buddy_depth_differs;
            } else if (blocks + directory_.bucket(*buddy).blocks() >= 2 * theta_blocks_) {
                reason = BucketFlagReason::undersized_combined_too_large;
            }
            flags.push_back({b, reason, blocks});
        }
    }
    return flags;
}

bool PartitionGroup::has_fresh() const {
    for (const auto& b : directory_.buckets()) {
        if (b.has_fresh()) {
            return true;
        }
    }
    return false;
}

std::size_t PartitionGroup::tuple_count() const { return tuple_count(StreamId::S1) + tuple_count(StreamId::S2); }

std::size_t PartitionGroup::tuple_count(StreamId s) const {
    std::size_t n = 0;
    for (const auto& b : directory_.buckets()) {
        n += b.tuples(s);
    }
    return n;
}

std::size_t PartitionGroup::block_count() const {
    std::size_t n = 0;
    for (const auto& b : directory_.buckets()) {
        n += b.blocks();
    }
    return n;
}

}// namespace wjoin
