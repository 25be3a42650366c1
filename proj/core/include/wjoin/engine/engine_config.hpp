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
#include <wjoin/core/window.hpp>

#include <cstddef>

namespace wjoin {

struct EngineConfig {
    WindowSpec windows;
    std::uint32_t n_part = 60;
    std::size_t block_bytes = 4096;
    /// Tuning threshold in blocks; buckets are kept within [theta, 2*theta].
    std::size_t theta_blocks = 384;
    unsigned max_depth = 12;
    std::size_t buffer_bytes = 1 << 20;

    std::size_t block_tuples() const { return Block::capacity_for(block_bytes); }

    void validate() const;
};

}// namespace wjoin
