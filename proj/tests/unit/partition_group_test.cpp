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

#include <wjoin/engine/partition_group.hpp>

#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace wjoin;
using wjoin::fixtures::tuple;

namespace {

EngineConfig small_config(std::int64_t w_ms, std::size_t theta_blocks = 4) {
    EngineConfig c;
    c.windows = {Timestamp{w_ms}, Timestamp{w_ms}};
    c.block_bytes = 4 * kTupleWireBytes;
    c.theta_blocks = theta_blocks;
    c.max_depth = 8;
    return c;
}

WorkMeter meter() { return WorkMeter(SimTime{0}, CostModel{}); }

}// namespace

TEST(JoinPass, SinglePairInWindow) {
    PartitionGroup g(0, small_config(1000));
    auto m = meter();
    std::vector<JoinResult> out;
    const std::vector<Tuple> in{tuple(StreamId::S1, 10, 7, 0), tuple(StreamId::S2, 20, 7, 1)};
    g.insert_and_join(in, m, out);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].seq1, 0u);
    EXPECT_EQ(out[0].seq2, 1u);
    EXPECT_EQ(out[0].key, 7u);
    EXPECT_FALSE(g.has_fresh());
}

TEST(JoinPass, ExpiredOppositeTupleDoesNotJoin) {
    PartitionGroup g(0, small_config(1000));
    auto m = meter();
    std::vector<JoinResult> out;
    const std::vector<Tuple> in{tuple(StreamId::S1, 10, 7, 0), tuple(StreamId::S2, 1011, 7, 1)};
    g.insert_and_join(in, m, out);
    EXPECT_TRUE(out.empty());
}

TEST(JoinPass, FullHeadTriggersPassBeforeBatchEnds) {
    PartitionGroup g(0, small_config(100'000));
    auto m = meter();
    std::vector<JoinResult> out;
    g.insert_and_join(std::vector<Tuple>{tuple(StreamId::S2, 0, 3, 100)}, m, out);
    ASSERT_TRUE(out.empty());
    // The 4th S1 tuple fills the head block and triggers the pass; the 5th opens a new block
    // that is joined by the closing flush.
    std::vector<Tuple> batch;
    for (std::uint64_t i = 0; i < 4; ++i) {
        batch.push_back(tuple(StreamId::S1, 1 + static_cast<std::int64_t>(i), 3, i));
    }
    batch.push_back(tuple(StreamId::S1, 10, 99, 4));
    const auto before = m.comparisons();
    g.insert_and_join(batch, m, out);
    EXPECT_EQ(out.size(), 4u);
    EXPECT_EQ(m.comparisons() - before, 4u + 1u);
}

TEST(JoinPass, MatchesOracleOnRandomInput) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto arrivals = fixtures::random_arrivals(rng, 1000, 20'000, 40);
        const std::int64_t w = 500 + static_cast<std::int64_t>(rng() % 5000);
        for (const bool tune : {false, true}) {
            PartitionGroup g(0, small_config(w, 2));
            auto m = meter();
            const auto out = fixtures::run_group(g, arrivals, 1 + rng() % 50, tune, m);
            const auto expected = oracle::brute_force_join(arrivals, w, w);
            const auto cmp = oracle::compare(out, expected, arrivals);
            ASSERT_TRUE(cmp.equal()) << cmp.summary() << " trial " << trial << " tune " << tune;
        }
    }
}

TEST(JoinPass, AsymmetricWindowsMatchOracle) {
    std::mt19937_64 rng(12);
    const auto arrivals = fixtures::random_arrivals(rng, 2000, 30'000, 30);
    EngineConfig c = small_config(1);
    c.windows = {Timestamp{700}, Timestamp{3000}};
    PartitionGroup g(0, c);
    auto m = meter();
    const auto out = fixtures::run_group(g, arrivals, 17, true, m);
    const auto cmp = oracle::compare(out, oracle::brute_force_join(arrivals, 700, 3000), arrivals);
    EXPECT_TRUE(cmp.equal()) << cmp.summary();
}

TEST(Expire, NothingExpiredIsANoOp) {
    PartitionGroup g(0, small_config(1000));
    auto m = meter();
    std::vector<JoinResult> out;
    g.insert_and_join(std::vector<Tuple>{tuple(StreamId::S1, 10, 1, 0), tuple(StreamId::S2, 20, 2, 1)}, m, out);
    g.expire(Timestamp{500}, m, out);
    EXPECT_TRUE(out.empty());
    EXPECT_EQ(g.tuple_count(), 2u);
}

TEST(Expire, ExpiredBlockRemovedWithEmptyOpposite) {
    PartitionGroup g(0, small_config(1000));
    auto m = meter();
    std::vector<JoinResult> out;
    g.insert_and_join(std::vector<Tuple>{tuple(StreamId::S1, 10, 1, 0)}, m, out);
    g.expire(Timestamp{1011}, m, out);
    EXPECT_TRUE(out.empty());
    EXPECT_EQ(g.tuple_count(), 0u);
    EXPECT_EQ(g.block_count(), 0u);
}

TEST(Expire, ExpiringBlockMeetsFreshOppositeTupleOnce) {
    PartitionGroup g(0, small_config(1000));
    auto m = meter();
    std::vector<JoinResult> out;
    g.insert_and_join(std::vector<Tuple>{tuple(StreamId::S1, 0, 5, 0)}, m, out);
    // Place a fresh S2 tuple without running its pass, as happens mid-batch before a head fills.
    auto& bucket = g.directory().bucket(0);
    bucket.window(StreamId::S2).emplace_back(4);
    bucket.window(StreamId::S2).back().append(tuple(StreamId::S2, 1000, 5, 1));
    g.expire(Timestamp{1001}, m, out);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].seq1, 0u);
    EXPECT_EQ(out[0].seq2, 1u);
    g.flush_fresh(m, out);
    EXPECT_EQ(out.size(), 1u);
}

TEST(Tune, InRangeBucketIsLeftAlone) {
    PartitionGroup g(0, small_config(1'000'000, 2));
    auto m = meter();
    std::vector<JoinResult> out;
    std::vector<Tuple> in;
    for (std::uint64_t i = 0; i < 12; ++i) {
        in.push_back(tuple(StreamId::S1, static_cast<std::int64_t>(i), static_cast<std::uint32_t>(i), i));
    }
    g.insert_and_join(in, m, out);
    ASSERT_EQ(g.block_count(), 3u);
    const auto r = g.tune(m);
    EXPECT_EQ(r.splits + r.merges, 0u);
    EXPECT_TRUE(r.flags.empty());
    EXPECT_EQ(g.directory().bucket_count(), 1u);
}

TEST(Tune, SecondPassIsANoOp) {
    std::mt19937_64 rng(5);
    PartitionGroup g(0, small_config(1'000'000, 2));
    auto m = meter();
    const auto arrivals = fixtures::random_arrivals(rng, 300, 1000, 100'000);
    fixtures::run_group(g, arrivals, 300, false, m);
    g.tune(m);
    const auto layout = g.directory().layout();
    const auto again = g.tune(m);
    EXPECT_EQ(again.splits + again.merges, 0u);
    EXPECT_EQ(g.directory().layout(), layout);
}

TEST(Tune, OversizedBucketSplits) {
    auto c = small_config(1'000'000, 2);
    PartitionGroup g(0, c);
    auto m = meter();
    std::vector<JoinResult> out;
    std::vector<Tuple> in;
    // 5 blocks (2*theta + 1) of distinct keys in one bucket.
    for (std::uint64_t i = 0; i < 20; ++i) {
        in.push_back(tuple(StreamId::S1, static_cast<std::int64_t>(i), static_cast<std::uint32_t>(i * 101), i));
    }
    g.insert_and_join(in, m, out);
    ASSERT_EQ(g.block_count(), 5u);
    const auto r = g.tune(m);
    EXPECT_GE(r.splits, 1u);
    EXPECT_EQ(g.tuple_count(), 20u);
    for (const auto& p : g.directory().buckets()) {
        EXPECT_GE(p.local_depth, 1u);
    }
    for (const auto& f : r.flags) {
        EXPECT_NE(f.reason, BucketFlagReason::unjustified);
    }
}

TEST(Tune, UndersizedBuddiesMerge) {
    auto c = small_config(1'000'000, 2);
    PartitionGroup g(0, c);
    g.directory() = ExtendibleDirectory::from_layout(1, {{1, 0}, {1, 1}});
    auto m = meter();
    std::vector<JoinResult> out;
    g.insert_and_join(std::vector<Tuple>{tuple(StreamId::S1, 0, 1, 0), tuple(StreamId::S1, 1, 2, 1)}, m, out);
    const auto r = g.tune(m);
    EXPECT_EQ(r.merges, 1u);
    EXPECT_EQ(g.directory().global_depth(), 0u);
    EXPECT_EQ(g.directory().bucket(0).local_depth, 0u);
    EXPECT_EQ(g.tuple_count(), 2u);
}

TEST(Tune, SkippedWhileFresh) {
    PartitionGroup g(0, small_config(1000, 1));
    auto& bucket = g.directory().bucket(0);
    bucket.window(StreamId::S1).emplace_back(4);
    bucket.window(StreamId::S1).back().append(tuple(StreamId::S1, 0, 1, 0));
    auto m = meter();
    EXPECT_TRUE(g.tune(m).skipped);
}

TEST(Tune, HotKeyIsFlaggedNotUnjustified) {
    auto c = small_config(1'000'000, 1);
    c.max_depth = 3;
    PartitionGroup g(0, c);
    auto m = meter();
    std::vector<JoinResult> out;
    std::vector<Tuple> in;
    for (std::uint64_t i = 0; i < 40; ++i) {
        in.push_back(tuple(StreamId::S1, static_cast<std::int64_t>(i), 42, i));
    }
    g.insert_and_join(in, m, out);
    const auto r = g.tune(m);
    EXPECT_GE(r.refused_splits, 1u);
    bool hot = false;
    for (const auto& f : r.flags) {
        EXPECT_NE(f.reason, BucketFlagReason::unjustified);
        hot = hot || f.reason == BucketFlagReason::hot_key_at_max_depth;
    }
    EXPECT_TRUE(hot);
    EXPECT_EQ(g.directory().global_depth(), 3u);
}

TEST(TuneProperty, RandomStreamsLeaveOnlyJustifiedFlags) {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t theta = 1 + rng() % 4;
        auto c = small_config(200 + static_cast<std::int64_t>(rng() % 3000), theta);
        c.max_depth = 1 + static_cast<unsigned>(rng() % 8);
        PartitionGroup g(0, c);
        auto m = meter();
        const auto arrivals = fixtures::random_arrivals(rng, 800, 10'000, 1 + static_cast<std::uint32_t>(rng() % 500));
        std::vector<JoinResult> out;
        for (std::size_t i = 0; i < arrivals.size(); i += 25) {
            std::vector<Tuple> chunk;
            for (std::size_t j = i; j < std::min(arrivals.size(), i + 25); ++j) {
                chunk.push_back(arrivals[j].tuple);
            }
            g.insert_and_join(chunk, m, out);
            g.expire(chunk.back().timestamp, m, out);
            const auto r = g.tune(m);
            ASSERT_FALSE(r.skipped);
            ASSERT_TRUE(g.directory().invariant_holds());
            for (const auto& f : r.flags) {
                ASSERT_NE(f.reason, BucketFlagReason::unjustified) << "trial " << trial;
            }
        }
    }
}
