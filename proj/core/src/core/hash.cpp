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

#include <wjoin/core/hash.hpp>

#include <cassert>

namespace wjoin {

namespace {
constexpr std::uint64_t kFibonacci = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kBucketMultiplier = 0xD6E8FEB86659FD93ull;
}// namespace

GroupId hash_partition(std::uint32_t join_key, std::uint32_t n_part) {
    assert(n_part > 0);
    auto h = static_cast<std::uint32_t>((static_cast<std::uint64_t>(join_key) * kFibonacci) >> 32);
    return h % n_part;
}

std::uint32_t bucket_hash(std::uint32_t join_key) {
    auto h = static_cast<std::uint32_t>((static_cast<std::uint64_t>(join_key) * kBucketMultiplier) >> 32);
    // fold the high half down: the directory consumes low-order bits
    return h ^ (h >> 16);
}

}// namespace wjoin
