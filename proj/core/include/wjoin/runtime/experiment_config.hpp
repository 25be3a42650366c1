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

#include <wjoin/engine/engine_config.hpp>
#include <wjoin/engine/work_meter.hpp>
#include <wjoin/master/master_config.hpp>
#include <wjoin/transport/transport.hpp>
#include <wjoin/workload/generator.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace wjoin {

enum class Backend { sim, socket };

/// Flat experiment configuration. Key names follow the parameter table of the system
/// (w_minutes, lambda, b, th_con, th_sup, theta_mb, block_kb, t_d_sec, t_r_sec, n_g, beta,
/// n_slaves, n_part, seed) plus run-control keys.
struct ExperimentConfig {
    double w_minutes = 10.0;
    double lambda = 1500.0;
    double b = 0.7;
    double th_con = 0.01;
    double th_sup = 0.5;
    double theta_mb = 1.5;
    double block_kb = 4.0;
    double t_d_sec = 2.0;
    double t_r_sec = 20.0;
    std::uint32_t n_g = 1;
    double beta = 0.5;
    std::uint32_t n_slaves = 4;
    std::uint32_t n_part = 60;
    std::uint64_t seed = 1;

    double duration_sec = 1200.0;
    double warmup_sec = 600.0;
    double measure_sec = 600.0;
    bool tuning = true;
    bool adaptive = true;
    ArrivalProcess arrivals = ArrivalProcess::poisson;
    std::uint32_t key_max = kMaxJoinKey;
    unsigned bmodel_depth = 10;
    double buffer_mb = 1.0;
    std::uint64_t master_buffer_tuples = std::uint64_t{1} << 24;
    double cost_ns = 100.0;
    double tuple_cost_ns = 100.0;
    double base_latency_us = 100.0;
    double bandwidth_mb_per_sec = 125.0;
    unsigned max_depth = 12;
    std::uint32_t initial_active = 0;
    Backend backend = Backend::sim;
    double time_scale = 1.0;
    /// Reorganization index at which one group is moved regardless of load (-1: never).
    std::int64_t force_move = -1;

    /// Sets one key from its textual value. Unknown keys and bad values raise ConfigError.
    void set(const std::string& key, const std::string& value);

    /// Reads `key = value` lines; '#' starts a comment.
    static ExperimentConfig parse(const std::string& text, ExperimentConfig base);
    static ExperimentConfig parse(const std::string& text);
    static ExperimentConfig load(const std::filesystem::path& path, ExperimentConfig base);
    static ExperimentConfig load(const std::filesystem::path& path);

    /// All keys with their current values, in a fixed order.
    std::vector<std::pair<std::string, std::string>> entries() const;
    std::string to_text() const;

    std::uint32_t active_at_start() const { return initial_active == 0 ? n_slaves : initial_active; }

    EngineConfig engine() const;
    CostModel cost() const;
    LinkModel link() const;
    WorkloadConfig workload() const;
    MasterConfig master() const;
    IntervalGrid grid() const;

    /// Cross-field validation; raises ConfigError naming the offending field.
    void validate() const;
};

}// namespace wjoin
