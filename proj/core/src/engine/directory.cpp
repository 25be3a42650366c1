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

#include <wjoin/core/errors.hpp>
#include <wjoin/engine/directory.hpp>

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace wjoin {

namespace {

std::uint32_t reverse_bits(std::uint32_t value, unsigned width) {
    std::uint32_t out = 0;
    for (unsigned i = 0; i < width; ++i) {
        out = (out << 1) | ((value >> i) & 1u);
    }
    return out;
}

std::deque<Block> to_deque(std::vector<Block>&& blocks) {
    return {std::make_move_iterator(blocks.begin()), std::make_move_iterator(blocks.end())};
}

std::vector<Tuple> flatten(const std::deque<Block>& window) {
    std::vector<Tuple> out;
    for (const auto& b : window) {
        out.insert(out.end(), b.tuples().begin(), b.tuples().end());
    }
    return out;
}

}// namespace

std::size_t MiniPartition::tuples(StreamId s) const {
    std::size_t n = 0;
    for (const auto& b : window(s)) {
        n += b.size();
    }
    return n;
}

std::size_t MiniPartition::tuples() const { return tuples(StreamId::S1) + tuples(StreamId::S2); }

bool MiniPartition::has_fresh() const {
    for (const auto& w : windows) {
        if (!w.empty() && w.back().fresh_count() > 0) {
            return true;
        }
    }
    return false;
}

std::uint32_t buddy_entry(std::uint32_t first, unsigned global_depth, unsigned local_depth) {
    assert(local_depth >= 1 && local_depth <= global_depth);
    const std::uint32_t span = 1u << (global_depth - local_depth);
    return first % (2 * span) == 0 ? first + span : first - span;
}

std::uint32_t slot_for_hash(std::uint32_t hash, unsigned global_depth) { return reverse_bits(hash, global_depth); }

std::uint32_t suffix_for_slot(std::uint32_t slot, unsigned global_depth) { return reverse_bits(slot, global_depth); }

ExtendibleDirectory::ExtendibleDirectory() : slots_{0}, buckets_(1) {}

ExtendibleDirectory ExtendibleDirectory::from_layout(unsigned global_depth, const std::vector<BucketLayout>& layout) {
    if (global_depth > 16) {
        throw ProtocolFault("directory depth out of range");
    }
    ExtendibleDirectory dir;
    dir.global_depth_ = global_depth;
    dir.slots_.assign(std::size_t{1} << global_depth, 0);
    dir.buckets_.assign(layout.size(), MiniPartition{});
    std::uint32_t expected_first = 0;
    for (std::size_t i = 0; i < layout.size(); ++i) {
        const auto& l = layout[i];
        if (l.local_depth > global_depth) {
            throw ProtocolFault("bucket depth exceeds directory depth");
        }
        const std::uint32_t span = 1u << (global_depth - l.local_depth);
        if (l.first_slot != expected_first || l.first_slot % span != 0) {
            throw ProtocolFault("bucket layout does not tile the directory");
        }
        for (std::uint32_t s = l.first_slot; s < l.first_slot + span; ++s) {
            dir.slots_[s] = static_cast<std::uint32_t>(i);
        }
        dir.buckets_[i].local_depth = l.local_depth;
        expected_first += span;
    }
    if (expected_first != dir.slots_.size()) {
        throw ProtocolFault("bucket layout does not tile the directory");
    }
    return dir;
}

std::uint32_t ExtendibleDirectory::first_slot(std::size_t bucket) const {
    // Buckets are ordered by first slot, so the first slot is the running sum of spans.
    std::uint32_t first = 0;
    for (std::size_t i = 0; i < bucket; ++i) {
        first += slot_span(i);
    }
    return first;
}

std::vector<BucketLayout> ExtendibleDirectory::layout() const {
    std::vector<BucketLayout> out;
    out.reserve(buckets_.size());
    std::uint32_t first = 0;
    for (std::size_t i = 0; i < buckets_.size(); ++i) {
        out.push_back({buckets_[i].local_depth, first});
        first += slot_span(i);
    }
    return out;
}

void ExtendibleDirectory::double_slots() {
    std::vector<std::uint32_t> doubled(slots_.size() * 2);
    for (std::size_t i = 0; i < slots_.size(); ++i) {
        doubled[2 * i] = slots_[i];
        doubled[2 * i + 1] = slots_[i];
    }
    slots_ = std::move(doubled);
    ++global_depth_;
}

void ExtendibleDirectory::halve_while_possible() {
    while (global_depth_ > 0
           && std::none_of(buckets_.begin(), buckets_.end(), [&](const MiniPartition& b) {
                  return b.local_depth == global_depth_;
              })) {
        std::vector<std::uint32_t> halved(slots_.size() / 2);
        for (std::size_t i = 0; i < halved.size(); ++i) {
            halved[i] = slots_[2 * i];
        }
        slots_ = std::move(halved);
        --global_depth_;
    }
}

SplitResult ExtendibleDirectory::split_bucket(std::size_t bucket, unsigned max_depth, std::size_t block_tuples) {
    if (buckets_.at(bucket).has_fresh()) {
        throw std::logic_error("split of a bucket holding fresh tuples");
    }
    const unsigned depth = buckets_[bucket].local_depth;
    if (depth == global_depth_) {
        if (global_depth_ >= max_depth) {
            return SplitResult::refused_max_depth;
        }
        double_slots();
    }

    const std::uint32_t first = first_slot(bucket);
    const std::uint32_t span = slot_span(bucket);
    const std::uint32_t mid = first + span / 2;

    MiniPartition low;
    MiniPartition high;
    low.local_depth = depth + 1;
    high.local_depth = depth + 1;
    for (std::size_t s = 0; s < 2; ++s) {
        std::vector<Tuple> to_low;
        std::vector<Tuple> to_high;
        for (const auto& t : flatten(buckets_[bucket].windows[s])) {
            ((bucket_hash(t.join_key) >> depth) & 1u ? to_high : to_low).push_back(t);
        }
        moved_ += to_low.size() + to_high.size();
        low.windows[s] = to_deque(pack_blocks(to_low, block_tuples));
        high.windows[s] = to_deque(pack_blocks(to_high, block_tuples));
    }

    buckets_[bucket] = std::move(low);
    buckets_.insert(buckets_.begin() + static_cast<std::ptrdiff_t>(bucket) + 1, std::move(high));
    for (auto& slot : slots_) {
        if (slot > bucket) {
            ++slot;
        }
    }
    for (std::uint32_t s = mid; s < first + span; ++s) {
        slots_[s] = static_cast<std::uint32_t>(bucket + 1);
    }
    return SplitResult::split;
}

std::optional<std::size_t> ExtendibleDirectory::buddy_of(std::size_t bucket) const {
    const unsigned depth = buckets_.at(bucket).local_depth;
    if (depth == 0) {
        return std::nullopt;
    }
    const std::size_t other = slots_[buddy_entry(first_slot(bucket), global_depth_, depth)];
    if (buckets_[other].local_depth != depth) {
        return std::nullopt;
    }
    return other;
}

bool ExtendibleDirectory::merge_buddy(std::size_t bucket, std::size_t theta_blocks, std::size_t block_tuples) {
    const auto buddy = buddy_of(bucket);
    if (!buddy) {
        return false;
    }
    if (buckets_[bucket].blocks() + buckets_[*buddy].blocks() >= 2 * theta_blocks) {
        return false;
    }
    if (buckets_[bucket].has_fresh() || buckets_[*buddy].has_fresh()) {
        throw std::logic_error("merge of a bucket holding fresh tuples");
    }
    const std::size_t lo = std::min(bucket, *buddy);
    const std::size_t hi = std::max(bucket, *buddy);

    MiniPartition merged;
    merged.local_depth = buckets_[lo].local_depth - 1;
    for (std::size_t s = 0; s < 2; ++s) {
        const auto a = flatten(buckets_[lo].windows[s]);
        const auto b = flatten(buckets_[hi].windows[s]);
        std::vector<Tuple> all;
        all.reserve(a.size() + b.size());
        std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(all),
                   [](const Tuple& x, const Tuple& y) { return x.timestamp < y.timestamp; });
        moved_ += all.size();
        merged.windows[s] = to_deque(pack_blocks(all, block_tuples));
    }

    buckets_[lo] = std::move(merged);
    buckets_.erase(buckets_.begin() + static_cast<std::ptrdiff_t>(hi));
    for (auto& slot : slots_) {
        if (slot == hi) {
            slot = static_cast<std::uint32_t>(lo);
        } else if (slot > hi) {
            --slot;
        }
    }
    halve_while_possible();
    return true;
}

bool ExtendibleDirectory::invariant_holds() const {
    if (slots_.size() != (std::size_t{1} << global_depth_)) {
        return false;
    }
    std::uint64_t total = 0;
    std::uint32_t first = 0;
    for (std::size_t i = 0; i < buckets_.size(); ++i) {
        if (buckets_[i].local_depth > global_depth_) {
            return false;
        }
        const std::uint32_t span = slot_span(i);
        if (first % span != 0 || first + span > slots_.size()) {
            return false;
        }
        for (std::uint32_t s = first; s < first + span; ++s) {
            if (slots_[s] != i) {
                return false;
            }
        }
        total += span;
        first += span;
    }
    return total == slots_.size();
}

}// namespace wjoin
