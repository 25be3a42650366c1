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
#include <wjoin/core/types.hpp>

#include <cstdint>
#include <random>

namespace wjoin {

enum class ArrivalProcess { poisson, uniform };

struct WorkloadConfig {
    double lambda1 = 1500.0;
    double lambda2 = 1500.0;
    double b = 0.7;
    /// Keys are drawn from [0, key_max].
    std::uint32_t key_max = kMaxJoinKey;
    unsigned depth = 10;
    std::uint64_t seed = 1;
    ArrivalProcess process = ArrivalProcess::poisson;

    void validate() const;
};

/// Uniform double in [0, 1) from the top 53 bits of one generator draw.
double unit_uniform(std::mt19937_64& rng);

/// Exponential gap with mean 1/lambda seconds by inverse CDF. lambda == 0 yields SimTime::max().
SimTime next_interarrival(double lambda, std::mt19937_64& rng);

/// b-model key: descend `depth` halvings of [0, key_max], taking the lower half with
/// probability b, then pick uniformly inside the final range.
std::uint32_t next_key(double b, unsigned depth, std::uint32_t key_max, std::mt19937_64& rng);

/// Seed of the stream-specific generator derived from the run seed.
std::uint64_t stream_seed(std::uint64_t seed, StreamId stream);

/// Arrival times and keys for one stream.
class StreamGenerator {
  public:
    StreamGenerator(StreamId stream, double lambda, const WorkloadConfig& config);

    StreamId stream() const { return stream_; }
    /// Arrival instant of the next tuple, SimTime::max() when the stream is silent.
    SimTime next_time() const { return next_; }
    /// Draws the key of the pending arrival and schedules the one after it.
    std::uint32_t take_key();

  private:
    void schedule();

    StreamId stream_;
    double lambda_;
    double b_;
    unsigned depth_;
    std::uint32_t key_max_;
    ArrivalProcess process_;
    std::mt19937_64 rng_;
    SimTime next_{0};
    std::uint64_t emitted_ = 0;
};

}// namespace wjoin
