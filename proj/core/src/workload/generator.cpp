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
#include <wjoin/workload/generator.hpp>

#include <cmath>
#include <limits>

namespace wjoin {

void WorkloadConfig::validate() const {
    if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0) || !std::isfinite(lambda1) || !std::isfinite(lambda2)) {
        throw ConfigError("lambda", "arrival rates must be finite and non-negative");
    }
    if (!(b >= 0.5 && b < 1.0)) {
        throw ConfigError("b", "bias must lie in [0.5, 1)");
    }
    if (key_max == 0 || key_max > kMaxJoinKey) {
        throw ConfigError("key_max", "key domain must be within [1, 10^7]");
    }
    if (depth > 32) {
        throw ConfigError("bmodel_depth", "at most 32 levels");
    }
}

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

SimTime next_interarrival(double lambda, std::mt19937_64& rng) {
    if (lambda <= 0.0) {
        return SimTime::max();
    }
    const double u = unit_uniform(rng);
    return seconds(-std::log1p(-u) / lambda);
}

std::uint32_t next_key(double b, unsigned depth, std::uint32_t key_max, std::mt19937_64& rng) {
    std::uint64_t lo = 0;
    std::uint64_t hi = key_max;
    for (unsigned level = 0; level < depth && hi > lo; ++level) {
        const std::uint64_t mid = lo + (hi - lo + 1) / 2;
        if (unit_uniform(rng) < b) {
            hi = mid - 1;
        } else {
            lo = mid;
        }
    }
    const auto width = static_cast<double>(hi - lo + 1);
    const auto offset = std::min(static_cast<std::uint64_t>(unit_uniform(rng) * width), hi - lo);
    return static_cast<std::uint32_t>(lo + offset);
}

std::uint64_t stream_seed(std::uint64_t seed, StreamId stream) {
    // splitmix64 finaliser over the seed and stream id.
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(stream);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

StreamGenerator::StreamGenerator(StreamId stream, double lambda, const WorkloadConfig& config)
    : stream_(stream), lambda_(lambda), b_(config.b), depth_(config.depth), key_max_(config.key_max),
      process_(config.process), rng_(stream_seed(config.seed, stream)) {
    schedule();
}

void StreamGenerator::schedule() {
    if (lambda_ <= 0.0) {
        next_ = SimTime::max();
        return;
    }
    if (process_ == ArrivalProcess::uniform) {
        next_ = seconds(static_cast<double>(emitted_ + 1) / lambda_);
        return;
    }
    const auto gap = next_interarrival(lambda_, rng_);
    next_ = gap >= SimTime::max() - next_ ? SimTime::max() : next_ + gap;
}

std::uint32_t StreamGenerator::take_key() {
    const auto key = next_key(b_, depth_, key_max_, rng_);
    ++emitted_;
    schedule();
    return key;
}

}// namespace wjoin
