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

#include <wjoin/engine/directory.hpp>
#include <wjoin/engine/engine_config.hpp>
#include <wjoin/engine/work_meter.hpp>
#include <wjoin/metrics/join_result.hpp>

#include <span>
#include <vector>

namespace wjoin {

enum class BucketFlagReason {
    /// Oversized but the directory is at max depth (typically one very hot key).
    hot_key_at_max_depth,
    /// Undersized bucket of a single-bucket directory: nothing to merge with.
    undersized_no_buddy,
    /// Undersized but the buddy has been split further.
    undersized_buddy_depth_differs,
    /// Undersized but bucket plus buddy would reach 2*theta.
    undersized_combined_too_large,
    /// Outside the range with no reason: tuning should have acted on it.
    unjustified,
};

struct BucketFlag {
    std::size_t bucket = 0;
    BucketFlagReason reason{};
    std::size_t blocks = 0;
};

struct TuneReport {
    /// Tuning was not attempted because the group still held fresh tuples.
    bool skipped = false;
    std::size_t splits = 0;
    std::size_t merges = 0;
    std::size_t refused_splits = 0;
    /// Buckets left outside [theta, 2*theta] after tuning, with the reason they are allowed to be.
    std::vector<BucketFlag> flags;
};

/// The windows of both streams for one hash partition, organised as an extendible-hash directory.
class PartitionGroup {
  public:
    PartitionGroup(GroupId id, const EngineConfig& config);

    GroupId id() const { return id_; }

    /// Inserts arrivals in order, running a join pass whenever a head block fills, then a pass
    /// over every head still holding fresh tuples.
    void insert_and_join(std::span<const Tuple> arrivals, WorkMeter& meter, std::vector<JoinResult>& out);

    /// Runs the join pass of every head block holding fresh tuples.
    void flush_fresh(WorkMeter& meter, std::vector<JoinResult>& out);

    /// Drops leading blocks whose newest tuple left its window before `now`.
    void expire(Timestamp now, WorkMeter& meter, std::vector<JoinResult>& out);

    /// Splits buckets above 2*theta and merges buckets below theta. Skipped while fresh tuples exist.
    TuneReport tune(WorkMeter& meter);

    /// Classifies every bucket outside [theta, 2*theta] without changing anything.
    std::vector<BucketFlag> certify() const;

    bool has_fresh() const;
    std::size_t tuple_count() const;
    std::size_t tuple_count(StreamId s) const;
    std::size_t block_count() const;

    ExtendibleDirectory& directory() { return directory_; }
    const ExtendibleDirectory& directory() const { return directory_; }

  private:
    void join_pass(std::size_t bucket, StreamId stream, WorkMeter& meter, std::vector<JoinResult>& out);

    GroupId id_;
    WindowSpec windows_;
    std::size_t block_tuples_;
    std::size_t theta_blocks_;
    unsigned max_depth_;
    ExtendibleDirectory directory_;
};

}// namespace wjoin
