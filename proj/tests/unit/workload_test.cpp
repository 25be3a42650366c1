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
#include <wjoin/workload/feed.hpp>
#include <wjoin/workload/generator.hpp>

#include <gtest/gtest.h>
#include <filesystem>

using namespace wjoin;

namespace {

double mean_gap_seconds(double lambda, std::uint64_t seed, int n) {
    std::mt19937_64 rng(seed);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        sum += to_seconds(next_interarrival(lambda, rng));
    }
    return sum / n;
}

double lower_half_share(double b, std::uint64_t seed, int n) {
    std::mt19937_64 rng(seed);
    const std::uint32_t key_max = kMaxJoinKey;
    int lower = 0;
    for (int i = 0; i < n; ++i) {
        lower += next_key(b, 1, key_max, rng) <= key_max / 2 ? 1 : 0;
    }
    return static_cast<double>(lower) / n;
}

}// namespace

TEST(Interarrival, MeanMatchesRate) {
    EXPECT_NEAR(mean_gap_seconds(1500.0, 1, 100'000), 1.0 / 1500.0, 0.02 / 1500.0);
}

TEST(Interarrival, DoublingRateHalvesMean) {
    const double a = mean_gap_seconds(1500.0, 2, 100'000);
    const double b = mean_gap_seconds(3000.0, 3, 100'000);
    EXPECT_NEAR(b / a, 0.5, 0.01);
}

TEST(Interarrival, ZeroRateNeverFires) {
    std::mt19937_64 rng(1);
    EXPECT_EQ(next_interarrival(0.0, rng), SimTime::max());
}

TEST(Interarrival, SeedIsReproducible) {
    std::mt19937_64 a(77), b(77);
    for (int i = 0; i < 100; ++i) {
        ASSERT_EQ(next_interarrival(500.0, a), next_interarrival(500.0, b));
    }
}

TEST(BModel, HalfBiasIsUniform) {
    std::mt19937_64 rng(5);
    constexpr int n = 100'000;
    constexpr int bins = 16;
    std::array<int, bins> counts{};
    const std::uint32_t key_max = kMaxJoinKey;
    for (int i = 0; i < n; ++i) {
        const auto k = next_key(0.5, 10, key_max, rng);
        ++counts[static_cast<std::size_t>(static_cast<std::uint64_t>(k) * bins / (std::uint64_t{key_max} + 1))];
    }
    double chi2 = 0.0;
    const double expected = static_cast<double>(n) / bins;
    for (int c : counts) {
        chi2 += (c - expected) * (c - expected) / expected;
    }
    // 15 degrees of freedom, p = 0.001.
    EXPECT_LT(chi2, 37.70);
}

TEST(BModel, EightyTwentyAtOneLevel) { EXPECT_NEAR(lower_half_share(0.8, 6, 100'000), 0.8, 0.01); }

TEST(BModel, DefaultBiasAtOneLevel) { EXPECT_NEAR(lower_half_share(0.7, 7, 100'000), 0.7, 0.01); }

TEST(BModel, KeysStayInDomain) {
    std::mt19937_64 rng(8);
    for (std::uint32_t key_max : {1u, 2u, 3u, 100u, kMaxJoinKey}) {
        for (int i = 0; i < 2000; ++i) {
            ASSERT_LE(next_key(0.9, 12, key_max, rng), key_max);
        }
    }
}

TEST(BModel, DeepRecursionConcentratesMass) {
    // At depth L the lowest 2^-L of the domain carries b^L of the mass.
    std::mt19937_64 rng(9);
    const std::uint32_t key_max = (1u << 20) - 1;
    int hits = 0;
    constexpr int n = 100'000;
    for (int i = 0; i < n; ++i) {
        hits += next_key(0.7, 3, key_max, rng) < (1u << 17) ? 1 : 0;
    }
    EXPECT_NEAR(static_cast<double>(hits) / n, 0.343, 0.01);
}

TEST(WorkloadConfig, Validation) {
    WorkloadConfig c;
    EXPECT_NO_THROW(c.validate());
    c.b = 0.4;
    EXPECT_THROW(c.validate(), ConfigError);
    c.b = 0.7;
    c.lambda1 = -1;
    EXPECT_THROW(c.validate(), ConfigError);
    c.lambda1 = 10;
    c.key_max = 0;
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(StreamSeed, StreamsDiffer) {
    EXPECT_NE(stream_seed(1, StreamId::S1), stream_seed(1, StreamId::S2));
    EXPECT_NE(stream_seed(1, StreamId::S1), stream_seed(2, StreamId::S1));
}

TEST(SyntheticFeed, MergedOrderAndSequence) {
    WorkloadConfig c;
    c.lambda1 = 300;
    c.lambda2 = 100;
    c.seed = 3;
    SyntheticFeed feed(c, seconds(10));
    const auto all = drain_source(feed);
    ASSERT_FALSE(all.empty());
    std::array<std::size_t, 2> per_stream{};
    for (std::size_t i = 0; i < all.size(); ++i) {
        EXPECT_EQ(all[i].tuple.sequence(), i);
        EXPECT_LT(all[i].at, seconds(10));
        EXPECT_EQ(all[i].tuple.timestamp, to_timestamp(all[i].at));
        if (i > 0) {
            EXPECT_GE(all[i].at, all[i - 1].at);
        }
        ++per_stream[stream_index(all[i].tuple.stream)];
    }
    EXPECT_NEAR(static_cast<double>(per_stream[0]), 3000.0, 200.0);
    EXPECT_NEAR(static_cast<double>(per_stream[1]), 1000.0, 110.0);
}

TEST(SyntheticFeed, SameSeedSameArrivals) {
    WorkloadConfig c;
    c.lambda1 = c.lambda2 = 200;
    SyntheticFeed a(c, seconds(5)), b(c, seconds(5));
    EXPECT_EQ(drain_source(a), drain_source(b));
    c.seed = 2;
    SyntheticFeed d(c, seconds(5));
    SyntheticFeed e(WorkloadConfig{.lambda1 = 200, .lambda2 = 200}, seconds(5));
    EXPECT_NE(drain_source(d), drain_source(e));
}

TEST(SyntheticFeed, UniformProcessIsEvenlySpaced) {
    WorkloadConfig c;
    c.lambda1 = 100;
    c.lambda2 = 0;
    c.process = ArrivalProcess::uniform;
    SyntheticFeed feed(c, seconds(1));
    const auto all = drain_source(feed);
    ASSERT_EQ(all.size(), 99u);
    for (std::size_t i = 0; i < all.size(); ++i) {
        EXPECT_EQ(all[i].at, SimTime{10'000'000} * static_cast<SimTime::rep>(i + 1));
        EXPECT_EQ(all[i].tuple.stream, StreamId::S1);
    }
}

TEST(Trace, RoundTrip) {
    WorkloadConfig c;
    c.lambda1 = c.lambda2 = 50;
    SyntheticFeed feed(c, seconds(4));
    const auto arrivals = drain_source(feed);
    const auto path = std::filesystem::temp_directory_path() / "wjoin_trace_roundtrip.bin";
    write_trace(path, arrivals);
    EXPECT_EQ(std::filesystem::file_size(path), arrivals.size() * 72);
    EXPECT_EQ(read_trace(path), arrivals);
    std::filesystem::remove(path);
}

TEST(VectorSource, Replays) {
    std::vector<Arrival> in{{SimTime{1}, Tuple::make(StreamId::S1, Timestamp{0}, 1, 0)}};
    VectorSource src(in);
    EXPECT_EQ(drain_source(src), in);
    EXPECT_EQ(src.peek(), nullptr);
}
