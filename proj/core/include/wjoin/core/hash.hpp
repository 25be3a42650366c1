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

namespace wjoin {

/// Partition-group of a join key. Multiplicative (Fibonacci) hashing, high word, modulo n_part.
/// Pure: master and every slave compute the same group for the same key.
GroupId hash_partition(std::uint32_t join_key, std::uint32_t n_part);

/// Secondary hash used inside a partition-group by the extendible directories. Uses a different
/// multiplier so bucket splits are decorrelated from group assignment.
std::uint32_t bucket_hash(std::uint32_t join_key);

}// namespace wjoin
