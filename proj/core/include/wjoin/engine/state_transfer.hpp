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
#include <wjoin/core/wire.hpp>
#include <wjoin/engine/directory.hpp>

#include <vector>

namespace wjoin {

/// Serialized form of a partition-group: directory layout, window contents and the group's
/// unprocessed buffered tuples.
struct StateTransfer {
    struct Bucket {
        BucketLayout layout;
        /// S1 window followed by S2 window, each in temporal order.
        std::vector<Tuple> tuples;

        friend bool operator==(const Bucket&, const Bucket&) = default;
    };

    GroupId group = 0;
    unsigned global_depth = 0;
    std::vector<Bucket> buckets;
    std::vector<Tuple> pending;

    std::size_t tuple_count() const;

    std::vector<std::uint8_t> encode() const;
    static StateTransfer decode(std::span<const std::uint8_t> bytes);

    friend bool operator==(const StateTransfer&, const StateTransfer&) = default;
};

}// namespace wjoin
