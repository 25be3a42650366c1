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

#include <wjoin/core/block.hpp>

#include <cassert>

namespace wjoin {

Block::Block(std::size_t capacity_tuples) : capacity_(capacity_tuples) {
    assert(capacity_tuples > 0);
    tuples_.reserve(capacity_tuples);
}

void Block::append(const Tuple& t) {
    append_established(t);
    ++fresh_;
}

void Block::append_established(const Tuple& t) {
    assert(!full());
    assert(tuples_.empty() || tuples_.back().timestamp <= t.timestamp);
    tuples_.push_back(t);
}

std::vector<Block> pack_blocks(std::span<const Tuple> tuples, std::size_t capacity_tuples) {
    std::vector<Block> blocks;
    blocks.reserve((tuples.size() + capacity_tuples - 1) / capacity_tuples);
    for (const auto& t : tuples) {
        if (blocks.empty() || blocks.back().full()) {
            blocks.emplace_back(capacity_tuples);
        }
        blocks.back().append_established(t);
    }
    return blocks;
}

}// namespace wjoin
