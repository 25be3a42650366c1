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

#include <wjoin/core/block.hpp>
#include <wjoin/core/hash.hpp>
#include <wjoin/core/types.hpp>

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

namespace wjoin {

/// Extendible-hashing bucket of a partition-group. Holds one block sequence per stream.
struct MiniPartition {
    unsigned local_depth = 0;
    std::array<std::deque<Block>, 2> windows;

    std::deque<Block>& window(StreamId s) { return windows[stream_index(s)]; }
    const std::deque<Block>& window(StreamId s) const { return windows[stream_index(s)]; }

    std::size_t blocks() const { return windows[0].size() + windows[1].size(); }
    std::size_t tuples() const;
    std::size_t tuples(StreamId s) const;
    bool has_fresh() const;
};

/// First slot of the buddy of the bucket starting at `first`:
/// first + 2^(d-d') when 2^(d-d'+1) divides first, else first - 2^(d-d').
std::uint32_t buddy_entry(std::uint32_t first, unsigned global_depth, unsigned local_depth);

/// Directory slot of a hash value. The d low-order hash bits are stored bit-reversed, so a bucket
/// whose d' low hash bits agree owns one aligned, contiguous run of 2^(d-d') slots.
std::uint32_t slot_for_hash(std::uint32_t hash, unsigned global_depth);

/// The d-bit hash suffix represented by a slot (inverse of slot_for_hash on the low d bits).
std::uint32_t suffix_for_slot(std::uint32_t slot, unsigned global_depth);

struct BucketLayout {
    unsigned local_depth = 0;
    std::uint32_t first_slot = 0;

    friend bool operator==(const BucketLayout&, const BucketLayout&) = default;
};

enum class SplitResult { split, refused_max_depth };

/// Hash directory of one partition-group. Buckets are kept ordered by their first slot.
class ExtendibleDirectory {
  public:
    ExtendibleDirectory();

    /// Rebuilds an empty directory from serialized layout. Throws ProtocolFault unless the
    /// buckets tile the 2^d slots exactly with aligned runs.
    static ExtendibleDirectory from_layout(unsigned global_depth, const std::vector<BucketLayout>& layout);

    unsigned global_depth() const { return global_depth_; }
    std::size_t slot_count() const { return slots_.size(); }
    std::size_t bucket_count() const { return buckets_.size(); }

    std::size_t bucket_at_slot(std::uint32_t slot) const { return slots_.at(slot); }
    std::size_t bucket_for_hash(std::uint32_t hash) const { return slots_[slot_for_hash(hash, global_depth_)]; }
    std::size_t bucket_for_key(std::uint32_t key) const { return bucket_for_hash(bucket_hash(key)); }

    std::uint32_t first_slot(std::size_t bucket) const;
    std::uint32_t slot_span(std::size_t bucket) const { return 1u << (global_depth_ - buckets_[bucket].local_depth); }

    MiniPartition& bucket(std::size_t i) { return buckets_[i]; }
    const MiniPartition& bucket(std::size_t i) const { return buckets_[i]; }
    std::vector<MiniPartition>& buckets() { return buckets_; }
    const std::vector<MiniPartition>& buckets() const { return buckets_; }

    std::vector<BucketLayout> layout() const;

    /// Splits a bucket in two by hash bit d'. Doubles the directory first when d' == d.
    /// Refused (bucket untouched) when the directory is already at max_depth.
    /// Requires the bucket to hold no fresh tuples.
    SplitResult split_bucket(std::size_t bucket, unsigned max_depth, std::size_t block_tuples);

    /// Merges a bucket with its buddy when both have the same local depth and their combined
    /// size is below 2*theta. Halves the directory when no bucket remains at the global depth.
    /// Returns false (no-op) when the merge is not eligible.
    bool merge_buddy(std::size_t bucket, std::size_t theta_blocks, std::size_t block_tuples);

    /// Bucket index of the buddy when it exists with an equal local depth.
    std::optional<std::size_t> buddy_of(std::size_t bucket) const;

    /// Sum over buckets of 2^(d-d') == 2^d, and every slot points at the bucket owning its run.
    bool invariant_holds() const;

    /// Tuples moved by splits and merges since construction.
    std::uint64_t moved_tuples() const { return moved_; }

  private:
    void double_slots();
    void halve_while_possible();

    unsigned global_depth_ = 0;
    std::vector<std::uint32_t> slots_;
    std::vector<MiniPartition> buckets_;
    std::uint64_t moved_ = 0;
};

}// namespace wjoin
