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
#include <wjoin/core/errors.hpp>
#include <wjoin/core/hash.hpp>
#include <wjoin/core/interval_grid.hpp>
#include <wjoin/core/tuple.hpp>
#include <wjoin/core/window.hpp>

#include <gtest/gtest.h>
#include <random>

using namespace wjoin;

TEST(HashPartition, SinglePartitionIsAlwaysZero) {
    for (std::uint32_t k : {0u, 1u, 77u, 9'999'999u}) {
        EXPECT_EQ(hash_partition(k, 1), 0u);
    }
}

TEST(HashPartition, Deterministic) {
    for (std::uint32_t k = 0; k < 1000; ++k) {
        EXPECT_EQ(hash_partition(k, 60), hash_partition(k, 60));
    }
}

TEST(HashPartition, UniformKeysSpreadEvenly) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::uint32_t> key(0, kMaxJoinKey);
    std::vector<std::uint64_t> counts(60, 0);
    constexpr int n = 1'000'000;
    for (int i = 0; i < n; ++i) {
        ++counts[hash_partition(key(rng), 60)];
    }
    const double expected = n / 60.0;
    for (auto c : counts) {
        EXPECT_NEAR(static_cast<double>(c), expected, 0.05 * expected);
    }
}

TEST(HashPartition, ConsecutiveKeysSpreadEvenly) {
    std::vector<std::uint64_t> counts(60, 0);
    for (std::uint32_t k = 0; k < 600'000; ++k) {
        ++counts[hash_partition(k, 60)];
    }
    for (auto c : counts) {
        EXPECT_NEAR(static_cast<double>(c), 10'000.0, 500.0);
    }
}

TEST(BucketHash, LowBitsBalanced) {
    // The directory splits on low-order bits, so each of them should be close to a fair coin.
    std::array<std::uint64_t, 12> ones{};
    constexpr std::uint32_t n = 200'000;
    for (std::uint32_t k = 0; k < n; ++k) {
        const auto h = bucket_hash(k * 37 + 11);
        for (unsigned b = 0; b < ones.size(); ++b) {
            ones[b] += (h >> b) & 1u;
        }
    }
    for (auto c : ones) {
        EXPECT_NEAR(static_cast<double>(c) / n, 0.5, 0.01);
    }
}

TEST(WindowMembership, Boundaries) {
    const WindowSpec spec{Timestamp{600'000}, Timestamp{600'000}};
    const auto t = Tuple::make(StreamId::S1, Timestamp{1000}, 1, 0);
    EXPECT_TRUE(window_membership(Timestamp{1000}, t, spec));
    EXPECT_TRUE(window_membership(Timestamp{1000 + 600'000}, t, spec));
    EXPECT_FALSE(window_membership(Timestamp{1001 + 600'000}, t, spec));
}

TEST(WindowMembership, UsesOwnStreamWindow) {
    const WindowSpec spec{Timestamp{100}, Timestamp{500}};
    const auto s1 = Tuple::make(StreamId::S1, Timestamp{0}, 1, 0);
    const auto s2 = Tuple::make(StreamId::S2, Timestamp{0}, 1, 1);
    EXPECT_FALSE(window_membership(Timestamp{300}, s1, spec));
    EXPECT_TRUE(window_membership(Timestamp{300}, s2, spec));
}

TEST(Joinable, RequiresOppositeStreamsAndEqualKeys) {
    const WindowSpec spec{Timestamp{1000}, Timestamp{1000}};
    const auto a = Tuple::make(StreamId::S1, Timestamp{10}, 5, 0);
    const auto b = Tuple::make(StreamId::S2, Timestamp{20}, 5, 1);
    const auto c = Tuple::make(StreamId::S1, Timestamp{20}, 5, 2);
    const auto d = Tuple::make(StreamId::S2, Timestamp{20}, 6, 3);
    EXPECT_TRUE(joinable(a, b, spec));
    EXPECT_TRUE(joinable(b, a, spec));
    EXPECT_FALSE(joinable(a, c, spec));
    EXPECT_FALSE(joinable(a, d, spec));
    const auto late = Tuple::make(StreamId::S2, Timestamp{1011}, 5, 4);
    EXPECT_FALSE(joinable(a, late, spec));
}

TEST(WindowSpec, RejectsNonPositive) {
    WindowSpec spec{Timestamp{0}, Timestamp{10}};
    EXPECT_THROW(spec.validate(), ConfigError);
}

TEST(Tuple, SequenceRoundTrip) {
    const auto t = Tuple::make(StreamId::S2, Timestamp{42}, 9, 0x0123456789ABCDEFull);
    EXPECT_EQ(t.sequence(), 0x0123456789ABCDEFull);
    EXPECT_EQ(t.stream, StreamId::S2);
}

TEST(Tuple, WireRoundTrip) {
    std::vector<Tuple> in;
    for (std::uint64_t i = 0; i < 50; ++i) {
        auto t = Tuple::make(i % 2 ? StreamId::S1 : StreamId::S2, Timestamp{static_cast<std::int64_t>(i * 3)},
                             static_cast<std::uint32_t>(i * 7919), i);
        t.payload[20] = static_cast<std::uint8_t>(i);
        in.push_back(t);
    }
    ByteWriter w;
    encode_tuples(in, w);
    EXPECT_EQ(w.size(), in.size() * kTupleWireBytes);
    ByteReader r(w.bytes());
    EXPECT_EQ(decode_tuples(r, in.size()), in);
    EXPECT_TRUE(r.done());
}

TEST(Tuple, TruncatedDecodeFaults) {
    ByteWriter w;
    encode_tuple(Tuple::make(StreamId::S1, Timestamp{1}, 1, 1), w);
    auto bytes = std::move(w).take();
    bytes.pop_back();
    ByteReader r(bytes);
    EXPECT_THROW(decode_tuple(r), ProtocolFault);
}

TEST(Block, FreshSuffixAndSettle) {
    Block b(4);
    b.append_established(Tuple::make(StreamId::S1, Timestamp{1}, 1, 0));
    b.append(Tuple::make(StreamId::S1, Timestamp{2}, 1, 1));
    b.append(Tuple::make(StreamId::S1, Timestamp{3}, 1, 2));
    EXPECT_EQ(b.fresh_count(), 2u);
    EXPECT_EQ(b.established().size(), 1u);
    EXPECT_EQ(b.fresh().front().sequence(), 1u);
    EXPECT_EQ(b.oldest(), Timestamp{1});
    EXPECT_EQ(b.newest(), Timestamp{3});
    b.settle();
    EXPECT_EQ(b.fresh_count(), 0u);
    EXPECT_FALSE(b.full());
    b.append(Tuple::make(StreamId::S1, Timestamp{4}, 1, 3));
    EXPECT_TRUE(b.full());
}

TEST(Block, CapacityFromBytes) { EXPECT_EQ(Block::capacity_for(4096), 64u); }

TEST(Block, PackPreservesOrder) {
    std::vector<Tuple> ts;
    for (int i = 0; i < 10; ++i) {
        ts.push_back(Tuple::make(StreamId::S1, Timestamp{i}, 1, static_cast<std::uint64_t>(i)));
    }
    const auto blocks = pack_blocks(ts, 4);
    ASSERT_EQ(blocks.size(), 3u);
    EXPECT_EQ(blocks[2].size(), 2u);
    EXPECT_EQ(blocks[1].tuples().front().sequence(), 4u);
    for (const auto& b : blocks) {
        EXPECT_EQ(b.fresh_count(), 0u);
    }
}

TEST(IntervalGrid, IndexAndBounds) {
    const auto g = IntervalGrid::make(seconds(10), seconds(5), seconds(22));
    EXPECT_EQ(g.count, 3u);
    EXPECT_EQ(g.index(seconds(9)), -1);
    EXPECT_EQ(g.index(seconds(10)), 0);
    EXPECT_EQ(g.index(seconds(15)), 1);
    EXPECT_EQ(g.index(seconds(21)), 2);
    EXPECT_EQ(g.index(seconds(40)), 2);
    EXPECT_EQ(g.end_of(2), seconds(22));
    EXPECT_EQ(g.begin_of(1), seconds(15));
}

TEST(IntervalGrid, NoWarmupCoversWholeRun) {
    const auto g = IntervalGrid::make(SimTime{0}, seconds(10), seconds(10));
    EXPECT_EQ(g.count, 1u);
    EXPECT_EQ(g.index(SimTime{0}), 0);
}
