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

#include <wjoin/master/master.hpp>
#include <wjoin/metrics/join_result.hpp>
#include <wjoin/metrics/run_metrics.hpp>
#include <wjoin/metrics/run_record.hpp>
#include <wjoin/runtime/experiment_config.hpp>
#include <wjoin/slave/slave_runtime.hpp>
#include <wjoin/transport/event_log.hpp>
#include <wjoin/workload/feed.hpp>

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace wjoin {

struct RunOptions {
    /// Keep every join result (needed for oracle comparison).
    bool retain_results = false;
    /// Replay these arrivals instead of generating the workload.
    std::optional<std::vector<Arrival>> arrivals;
    LoadScript load_script;
    /// Overrides the config's force_move behaviour when set.
    ForcedMoves forced_moves;
};

struct SlaveSummary {
    NodeId id = 0;
    TimeTotals totals;
    SimTime clock_end{0};
    SlaveStats stats;
};

struct RunOutcome {
    ExperimentConfig config;
    RunMetrics metrics;
    std::shared_ptr<EventLog> events;
    std::shared_ptr<RunRecord> record;
    std::vector<JoinResult> results;
    std::uint64_t total_results = 0;
    MasterStats master;
    std::vector<SlaveSummary> slaves;
    TimeTotals master_totals;
    std::uint64_t slot_violations = 0;
    /// Post-run invariant failures; empty on a clean run.
    std::vector<std::string> violations;
    double wall_seconds = 0.0;

    bool ok() const { return violations.empty(); }

    /// Writes events.csv, results.csv, run_record.csv and config.cfg into `dir`.
    void write_artifacts(const std::filesystem::path& dir) const;
};

/// Builds the cluster for the configured backend, runs it to completion and checks the
/// run-level invariants.
RunOutcome run_experiment(const ExperimentConfig& config, RunOptions options = {});

/// Default forced-move hook: at reorganization `at`, the lowest-id active slave owning groups
/// yields its highest group to the next active slave.
ForcedMoves force_move_at(std::uint64_t at);

/// TupleBatch deliveries must be strictly ordered by (epoch, slot, receiver). Returns a
/// description of the first offending record.
std::optional<std::string> check_batch_order(const std::vector<DeliveryRecord>& records);

}// namespace wjoin
