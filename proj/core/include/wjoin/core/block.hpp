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

#include <cstddef>
#include <span>
#include <vector>

namespace wjoin {

/// Fixed-capacity run of tuples in arrival order. The newest `fresh_count()` tuples are the
/// fresh suffix: appended but not yet used as the probing side of a join pass.
class Block {
  public:
    explicit Block(std::size_t capacity_tuples);

    static std::size_t capacity_for(std::size_t block_bytes) { return block_bytes / kTupleWireBytes; }

    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return tuples_.size(); }
    bool empty() const { return tuples_.empty(); }
    bool full() const { return tuples_.size() >= capacity_; }

    /// Appends a fresh tuple. Requires !full() and non-decreasing timestamps.
    void append(const Tuple& t);

    /// Appends a tuple that is already established (used when re-packing blocks).
    void append_established(const Tuple& t);

    std::span<const Tuple> tuples() const { return tuples_; }
    std::span<const Tuple> fresh() const { return std::span(tuples_).subspan(tuples_.size() - fresh_); }
    std::span<const Tuple> established() const { return std::span(tuples_).first(tuples_.size() - fresh_); }
    std::size_t fresh_count() const { return fresh_; }

    /// Marks every tuple established (the block's join pass completed).
    void settle() { fresh_ = 0; }

    Timestamp oldest() const { return tuples_.front().timestamp; }
    Timestamp newest() const { return tuples_.back().timestamp; }

  private:
    std::size_t capacity_;
    std::size_t fresh_ = 0;
    std::vector<Tuple> tuples_;
};

/// Packs tuples (already in temporal order) into established blocks of `capacity_tuples`.
std::vector<Block> pack_blocks(std::span<const Tuple> tuples, std::size_t capacity_tuples);

}// namespace wjoin
