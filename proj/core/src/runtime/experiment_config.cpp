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
#include <wjoin/runtime/experiment_config.hpp>

#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <sstream>

namespace wjoin {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size() || !std::isfinite(d)) {
            throw std::invalid_argument(v);
        }
        return d;
    } catch (const std::exception&) {
        throw ConfigError(key, fmt::format("'{}' is not a number", v));
    }
}

template <class Int>
Int parse_int(const std::string& key, const std::string& v) {
    Int out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw ConfigError(key, fmt::format("'{}' is not an integer in range", v));
    }
    return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "on" || v == "true" || v == "1" || v == "yes") {
        return true;
    }
    if (v == "off" || v == "false" || v == "0" || v == "no") {
        return false;
    }
    throw ConfigError(key, fmt::format("'{}' is not a boolean (on/off)", v));
}

std::string fmt_double(double d) { return fmt::format("{}", d); }

}// namespace

void ExperimentConfig::set(const std::string& key, const std::string& raw) {
    const auto v = trim(raw);
    const std::map<std::string, std::function<void()>> setters = {
        {"w_minutes", [&] { w_minutes = parse_double(key, v); }},
        {"lambda", [&] { lambda = parse_double(key, v); }},
        {"b", [&] { b = parse_double(key, v); }},
        {"th_con", [&] { th_con = parse_double(key, v); }},
        {"th_sup", [&] { th_sup = parse_double(key, v); }},
        {"theta_mb", [&] { theta_mb = parse_double(key, v); }},
        {"block_kb", [&] { block_kb = parse_double(key, v); }},
        {"t_d_sec", [&] { t_d_sec = parse_double(key, v); }},
        {"t_r_sec", [&] { t_r_sec = parse_double(key, v); }},
        {"n_g", [&] { n_g = parse_int<std::uint32_t>(key, v); }},
        {"beta", [&] { beta = parse_double(key, v); }},
        {"n_slaves", [&] { n_slaves = parse_int<std::uint32_t>(key, v); }},
        {"n_part", [&] { n_part = parse_int<std::uint32_t>(key, v); }},
        {"seed", [&] { seed = parse_int<std::uint64_t>(key, v); }},
        {"duration_sec", [&] { duration_sec = parse_double(key, v); }},
        {"warmup_sec", [&] { warmup_sec = parse_double(key, v); }},
        {"measure_sec", [&] { measure_sec = parse_double(key, v); }},
        {"tuning", [&] { tuning = parse_bool(key, v); }},
        {"adaptive", [&] { adaptive = parse_bool(key, v); }},
        {"arrivals",
         [&] {
             if (v == "poisson") {
                 arrivals = ArrivalProcess::poisson;
             } else if (v == "uniform") {
                 arrivals = ArrivalProcess::uniform;
             } else {
                 throw ConfigError(key, "expected poisson or uniform");
             }
         }},
        {"key_max", [&] { key_max = parse_int<std::uint32_t>(key, v); }},
        {"bmodel_depth", [&] { bmodel_depth = parse_int<unsigned>(key, v); }},
        {"buffer_mb", [&] { buffer_mb = parse_double(key, v); }},
        {"master_buffer_tuples", [&] { master_buffer_tuples = parse_int<std::uint64_t>(key, v); }},
        {"cost_ns", [&] { cost_ns = parse_double(key, v); }},
        {"tuple_cost_ns", [&] { tuple_cost_ns = parse_double(key, v); }},
        {"base_latency_us", [&] { base_latency_us = parse_double(key, v); }},
        {"bandwidth_mb_per_sec", [&] { bandwidth_mb_per_sec = parse_double(key, v); }},
        {"max_depth", [&] { max_depth = parse_int<unsigned>(key, v); }},
        {"initial_active", [&] { initial_active = parse_int<std::uint32_t>(key, v); }},
        {"backend",
         [&] {
             if (v == "sim") {
                 backend = Backend::sim;
             } else if (v == "socket") {
                 backend = Backend::socket;
             } else {
                 throw ConfigError(key, "expected sim or socket");
             }
         }},
        {"time_scale", [&] { time_scale = parse_double(key, v); }},
        {"force_move", [&] { force_move = parse_int<std::int64_t>(key, v); }},
    };
    auto it = setters.find(key);
    if (it == setters.end()) {
        throw ConfigError(key, "unknown configuration key");
    }
    it->second();
}

ExperimentConfig ExperimentConfig::parse(const std::string& text, ExperimentConfig base) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(fmt::format("line {}", lineno), "expected key = value");
        }
        base.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    return base;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config", fmt::format("cannot read {}", path.string()));
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), std::move(base));
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) { return parse(text, ExperimentConfig{}); }

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) { return load(path, ExperimentConfig{}); }

std::vector<std::pair<std::string, std::string>> ExperimentConfig::entries() const {
    return {
        {"w_minutes", fmt_double(w_minutes)},
        {"lambda", fmt_double(lambda)},
        {"b", fmt_double(b)},
        {"th_con", fmt_double(th_con)},
        {"th_sup", fmt_double(th_sup)},
        {"theta_mb", fmt_double(theta_mb)},
        {"block_kb", fmt_double(block_kb)},
        {"t_d_sec", fmt_double(t_d_sec)},
        {"t_r_sec", fmt_double(t_r_sec)},
        {"n_g", fmt::format("{}", n_g)},
        {"beta", fmt_double(beta)},
        {"n_slaves", fmt::format("{}", n_slaves)},
        {"n_part", fmt::format("{}", n_part)},
        {"seed", fmt::format("{}", seed)},
        {"duration_sec", fmt_double(duration_sec)},
        {"warmup_sec", fmt_double(warmup_sec)},
        {"measure_sec", fmt_double(measure_sec)},
        {"tuning", tuning ? "on" : "off"},
        {"adaptive", adaptive ? "on" : "off"},
        {"arrivals", arrivals == ArrivalProcess::poisson ? "poisson" : "uniform"},
        {"key_max", fmt::format("{}", key_max)},
        {"bmodel_depth", fmt::format("{}", bmodel_depth)},
        {"buffer_mb", fmt_double(buffer_mb)},
        {"master_buffer_tuples", fmt::format("{}", master_buffer_tuples)},
        {"cost_ns", fmt_double(cost_ns)},
        {"tuple_cost_ns", fmt_double(tuple_cost_ns)},
        {"base_latency_us", fmt_double(base_latency_us)},
        {"bandwidth_mb_per_sec", fmt_double(bandwidth_mb_per_sec)},
        {"max_depth", fmt::format("{}", max_depth)},
        {"initial_active", fmt::format("{}", initial_active)},
        {"backend", backend == Backend::sim ? "sim" : "socket"},
        {"time_scale", fmt_double(time_scale)},
        {"force_move", fmt::format("{}", force_move)},
    };
}

std::string ExperimentConfig::to_text() const {
    std::string out;
    for (const auto& [k, v] : entries()) {
        out += fmt::format("{} = {}\n", k, v);
    }
    return out;
}

EngineConfig ExperimentConfig::engine() const {
    EngineConfig e;
    const auto w = std::chrono::duration_cast<Timestamp>(std::chrono::duration<double, std::ratio<60>>(w_minutes));
    e.windows = WindowSpec{w, w};
    e.n_part = n_part;
    e.block_bytes = static_cast<std::size_t>(std::llround(block_kb * 1024.0));
    e.theta_blocks = static_cast<std::size_t>(std::llround(theta_mb * 1024.0 / block_kb));
    e.max_depth = max_depth;
    e.buffer_bytes = static_cast<std::size_t>(std::llround(buffer_mb * 1024.0 * 1024.0));
    return e;
}

CostModel ExperimentConfig::cost() const {
    return CostModel{SimTime(std::llround(cost_ns)), SimTime(std::llround(tuple_cost_ns))};
}

LinkModel ExperimentConfig::link() const {
    return LinkModel{SimTime(std::llround(base_latency_us * 1000.0)), bandwidth_mb_per_sec * 1e6};
}

WorkloadConfig ExperimentConfig::workload() const {
    WorkloadConfig w;
    w.lambda1 = lambda;
    w.lambda2 = lambda;
    w.b = b;
    w.key_max = key_max;
    w.depth = bmodel_depth;
    w.seed = seed;
    w.process = arrivals;
    return w;
}

IntervalGrid ExperimentConfig::grid() const {
    return IntervalGrid::make(seconds(warmup_sec), seconds(measure_sec), seconds(duration_sec));
}

MasterConfig ExperimentConfig::master() const {
    MasterConfig m;
    m.epochs.t_d = seconds(t_d_sec);
    m.epochs.t_r = seconds(t_r_sec);
    m.epochs.n_g = n_g;
    m.epochs.th_sup = th_sup;
    m.epochs.th_con = th_con;
    m.epochs.beta = beta;
    m.n_part = n_part;
    m.n_slaves = n_slaves;
    m.initial_active = active_at_start();
    m.buffer_capacity_tuples = master_buffer_tuples;
    m.seed = seed;
    m.adaptive = adaptive;
    m.run_end = seconds(duration_sec);
    m.grid = grid();
    return m;
}

void ExperimentConfig::validate() const {
    if (!(w_minutes > 0.0)) {
        throw ConfigError("w_minutes", "window must be positive");
    }
    if (!(block_kb > 0.0) || !(theta_mb > 0.0)) {
        throw ConfigError(block_kb > 0.0 ? "theta_mb" : "block_kb", "must be positive");
    }
    if (!(duration_sec > 0.0)) {
        throw ConfigError("duration_sec", "must be positive");
    }
    if (!(cost_ns >= 0.0) || !(tuple_cost_ns >= 0.0)) {
        throw ConfigError("cost_ns", "costs must be non-negative");
    }
    if (!(base_latency_us >= 0.0) || !(bandwidth_mb_per_sec > 0.0)) {
        throw ConfigError("bandwidth_mb_per_sec", "link parameters must be positive");
    }
    if (!(time_scale > 0.0)) {
        throw ConfigError("time_scale", "must be positive");
    }
    if (std::fabs(std::round(t_r_sec / t_d_sec) * t_d_sec - t_r_sec) > 1e-9) {
        throw ConfigError("t_r_sec", "must be an integer multiple of t_d_sec");
    }
    grid();
    engine().validate();
    workload().validate();
    master().validate();
}

}// namespace wjoin
