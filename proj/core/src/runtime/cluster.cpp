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
#include <wjoin/metrics/collector.hpp>
#include <wjoin/runtime/cluster.hpp>
#include <wjoin/transport/event_queue.hpp>
#include <wjoin/transport/sim_transport.hpp>
#include <wjoin/transport/socket_transport.hpp>

#include <chrono>
#include <exception>
#include <fmt/format.h>
#include <fstream>
#include <thread>
#include <tuple>

namespace wjoin {

namespace {

/// The master only sends; anything addressed to it is a protocol error.
class NoInbox final : public MessageHandler {
  public:
    std::optional<EpochMessage> on_message(const EpochMessage& msg) override {
        throw ProtocolFault(fmt::format("master received {}", kind_name(msg.kind)));
    }
};

std::unique_ptr<ArrivalSource> make_source(const ExperimentConfig& cfg, RunOptions& options) {
    if (options.arrivals) {
        return std::make_unique<VectorSource>(std::move(*options.arrivals));
    }
    return std::make_unique<SyntheticFeed>(cfg.workload(), seconds(cfg.duration_sec));
}

SlaveConfig slave_config(const ExperimentConfig& cfg, NodeId id) {
    SlaveConfig s;
    s.id = id;
    s.collector = static_cast<NodeId>(cfg.n_slaves + 1);
    s.engine = cfg.engine();
    s.cost = cfg.cost();
    s.tuning = cfg.tuning;
    s.ingest_mode = IngestMode::saturating;
    s.grid = cfg.grid();
    return s;
}

void install_initial_groups(const Master& master, std::vector<std::unique_ptr<SlaveRuntime>>& slaves) {
    for (const auto& [owner, groups] : master.buffer().assignment()) {
        for (const auto g : groups) {
            slaves.at(owner - 1)->engine().add_group(g);
        }
    }
    for (const auto id : master.active_slaves()) {
        slaves.at(id - 1)->set_active(true);
    }
}

void configure_master(Master& master, const ExperimentConfig& cfg, const RunOptions& options) {
    if (options.forced_moves) {
        master.set_forced_moves(options.forced_moves);
    } else if (cfg.force_move >= 0) {
        master.set_forced_moves(force_move_at(static_cast<std::uint64_t>(cfg.force_move)));
    }
}

SpreadStats spread(const std::vector<SimTime>& values) {
    SpreadStats s;
    if (values.empty()) {
        return s;
    }
    s.min = values.front();
    s.max = values.front();
    for (const auto v : values) {
        s.sum += v;
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
    }
    return s;
}

RunMetrics build_metrics(const ExperimentConfig& cfg, const Collector& collector,
                         const std::vector<const NodeClock*>& slave_clocks,
                         const std::vector<std::unique_ptr<SlaveRuntime>>& slaves, const MasterStats& master) {
    const auto grid = cfg.grid();
    RunMetrics m;
    m.key = RunKey{cfg.lambda, cfg.n_slaves, cfg.n_g, cfg.t_d_sec, cfg.tuning};
    for (std::size_t i = 0; i < grid.count; ++i) {
        IntervalMetrics row;
        row.index = i;
        row.start_sec = to_seconds(grid.begin_of(i));
        row.end_sec = to_seconds(grid.end_of(i));
        const auto& delays = collector.interval(i);
        row.results = delays.count;
        row.avg_delay_ms = delays.average_ms();
        if (delays.count > 0) {
            row.max_delay_ms = delays.max.count();
        }
        std::vector<SimTime> busy;
        std::vector<SimTime> idle;
        std::vector<SimTime> comm;
        for (const auto* c : slave_clocks) {
            const auto t = c->ledger().interval(i);
            busy.push_back(t.busy);
            idle.push_back(t.idle);
            comm.push_back(t.comm);
        }
        row.busy = spread(busy);
        row.idle = spread(idle);
        row.comm = spread(comm);
        const double epochs = to_seconds(grid.end_of(i) - grid.begin_of(i)) / cfg.t_d_sec;
        if (epochs > 0 && !slave_clocks.empty()) {
            row.busy_per_epoch_ms = static_cast<double>(row.busy.sum.count()) / 1e6
                / static_cast<double>(slave_clocks.size()) / epochs;
        }
        for (const auto& s : slaves) {
            row.peak_window_bytes = std::max(row.peak_window_bytes, s->stats().peak_window_bytes[i]);
            row.overloads += s->stats().overloads_per_interval[i];
        }
        row.master_peak_tuples = master.peak_per_interval[i];
        row.moves = master.moves_per_interval[i];
        row.active_slaves = master.active_per_interval[i];
        m.intervals.push_back(row);
    }
    return m;
}

void check_run(RunOutcome& out, const Master& master, const Collector& collector,
               const std::vector<std::unique_ptr<SlaveRuntime>>& slaves) {
    auto& v = out.violations;
    if (out.slot_violations > 0) {
        v.push_back(fmt::format("{} slot violations", out.slot_violations));
    }
    if (const auto bad = check_batch_order(out.events->ordered())) {
        v.push_back(*bad);
    }
    if (master.buffer().size() != 0 || master.buffer().accepted() != master.buffer().drained()) {
        v.push_back(fmt::format("tuple conservation: accepted {} drained {} still buffered {}",
                                master.buffer().accepted(), master.buffer().drained(), master.buffer().size()));
    }
    std::uint64_t slave_results = 0;
    for (const auto& s : slaves) {
        slave_results += s->stats().results;
        if (s->engine().buffer().size_tuples() != 0) {
            v.push_back(fmt::format("slave {} ended with {} unprocessed tuples", s->id(),
                                    s->engine().buffer().size_tuples()));
        }
        if (s->stats().unjustified_buckets > 0) {
            v.push_back(fmt::format("slave {} left {} buckets outside [theta, 2 theta] without cause", s->id(),
                                    s->stats().unjustified_buckets));
        }
    }
    if (slave_results != collector.total_results()) {
        v.push_back(fmt::format("collector received {} results, slaves emitted {}", collector.total_results(),
                                slave_results));
    }
    if (collector.negative_delays() > 0) {
        v.push_back(fmt::format("{} results with negative production delay", collector.negative_delays()));
    }
    if (!collector.shut_down()) {
        v.push_back("collector was not shut down");
    }
}

RunOutcome run_sim(const ExperimentConfig& cfg, RunOptions options) {
    RunOutcome out;
    out.config = cfg;
    out.events = std::make_shared<EventLog>();
    out.record = std::make_shared<RunRecord>();
    const auto grid = cfg.grid();
    const auto collector_id = static_cast<NodeId>(cfg.n_slaves + 1);

    SlotGuard guard(collector_id);
    SimTransport transport(cfg.link(), guard, *out.events);
    Collector collector(collector_id, grid, options.retain_results);
    SimNodeClock master_clock(grid);
    SimNodeClock collector_clock(grid);
    std::vector<std::unique_ptr<SimNodeClock>> clocks;
    std::vector<std::unique_ptr<SlaveRuntime>> slaves;
    for (NodeId id = 1; id <= cfg.n_slaves; ++id) {
        clocks.push_back(std::make_unique<SimNodeClock>(grid));
        slaves.push_back(std::make_unique<SlaveRuntime>(slave_config(cfg, id), transport, *clocks.back(),
                                                        out.record.get()));
        if (options.load_script) {
            slaves.back()->set_load_script(options.load_script);
        }
    }
    auto source = make_source(cfg, options);
    Master master(cfg.master(), transport, master_clock, *source, out.record.get());
    configure_master(master, cfg, options);
    install_initial_groups(master, slaves);

    NoInbox master_inbox;
    transport.attach(kMasterNode, master_inbox, master_clock);
    for (std::size_t i = 0; i < slaves.size(); ++i) {
        transport.attach(static_cast<NodeId>(i + 1), *slaves[i], *clocks[i]);
    }
    transport.attach(collector_id, collector, collector_clock, true);

    EventQueue queue;
    std::function<void()> step = [&] {
        master.tick();
        if (!master.finished()) {
            queue.schedule(std::max(master.next_tick(), queue.now()), kMasterNode, step);
        }
    };
    queue.schedule(master.next_tick(), kMasterNode, step);
    while (const auto next = queue.next_time()) {
        queue.advance_clock(*next);
    }

    out.slot_violations = guard.violations();
    std::vector<const NodeClock*> slave_clocks;
    for (std::size_t i = 0; i < slaves.size(); ++i) {
        const auto totals = clocks[i]->ledger().total();
        out.slaves.push_back({slaves[i]->id(), totals, clocks[i]->now(), slaves[i]->stats()});
        slave_clocks.push_back(clocks[i].get());
        if (totals.sum() != clocks[i]->now()) {
            out.violations.push_back(fmt::format("slave {} time accounting does not close", slaves[i]->id()));
        }
    }
    out.master_totals = master_clock.ledger().total();
    if (out.master_totals.sum() != master_clock.now()) {
        out.violations.push_back("master time accounting does not close");
    }
    out.master = master.stats();
    out.metrics = build_metrics(cfg, collector, slave_clocks, slaves, out.master);
    out.total_results = collector.total_results();
    out.results = collector.retained();
    check_run(out, master, collector, slaves);
    return out;
}

RunOutcome run_socket(const ExperimentConfig& cfg, RunOptions options) {
    RunOutcome out;
    out.config = cfg;
    out.events = std::make_shared<EventLog>();
    out.record = std::make_shared<RunRecord>();
    const auto grid = cfg.grid();
    const auto collector_id = static_cast<NodeId>(cfg.n_slaves + 1);
    const auto origin = std::chrono::steady_clock::now();

    SlotGuard guard(collector_id);
    SocketDirectory directory;
    RealNodeClock master_clock(grid, origin, cfg.time_scale);
    RealNodeClock collector_clock(grid, origin, cfg.time_scale);
    Collector collector(collector_id, grid, options.retain_results);
    SocketTransport collector_transport(collector_id, collector_clock, directory, guard, *out.events);
    collector_transport.listen();

    std::vector<std::unique_ptr<RealNodeClock>> clocks;
    std::vector<std::unique_ptr<SocketTransport>> transports;
    std::vector<std::unique_ptr<SlaveRuntime>> slaves;
    for (NodeId id = 1; id <= cfg.n_slaves; ++id) {
        clocks.push_back(std::make_unique<RealNodeClock>(grid, origin, cfg.time_scale));
        transports.push_back(std::make_unique<SocketTransport>(id, *clocks.back(), directory, guard, *out.events));
        transports.back()->listen();
        slaves.push_back(std::make_unique<SlaveRuntime>(slave_config(cfg, id), *transports.back(), *clocks.back(),
                                                        out.record.get()));
        if (options.load_script) {
            slaves.back()->set_load_script(options.load_script);
        }
    }
    SocketTransport master_transport(kMasterNode, master_clock, directory, guard, *out.events);
    auto source = make_source(cfg, options);
    Master master(cfg.master(), master_transport, master_clock, *source, out.record.get());
    configure_master(master, cfg, options);
    install_initial_groups(master, slaves);

    std::vector<std::exception_ptr> errors(slaves.size() + 1);
    std::vector<std::thread> threads;
    threads.emplace_back([&] {
        try {
            collector_transport.serve(collector);
        } catch (...) {
            errors[0] = std::current_exception();
        }
    });
    for (std::size_t i = 0; i < slaves.size(); ++i) {
        threads.emplace_back([&, i] {
            try {
                transports[i]->serve(*slaves[i]);
            } catch (...) {
                errors[i + 1] = std::current_exception();
            }
        });
    }
    std::exception_ptr master_error;
    try {
        master.run();
    } catch (...) {
        master_error = std::current_exception();
        collector_transport.stop();
        for (auto& t : transports) {
            t->stop();
        }
    }
    for (auto& t : threads) {
        t.join();
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    if (master_error) {
        std::rethrow_exception(master_error);
    }

    out.slot_violations = guard.violations();
    std::vector<const NodeClock*> slave_clocks;
    for (std::size_t i = 0; i < slaves.size(); ++i) {
        out.slaves.push_back({slaves[i]->id(), clocks[i]->ledger().total(), clocks[i]->now(), slaves[i]->stats()});
        slave_clocks.push_back(clocks[i].get());
    }
    out.master_totals = master_clock.ledger().total();
    out.master = master.stats();
    out.metrics = build_metrics(cfg, collector, slave_clocks, slaves, out.master);
    out.total_results = collector.total_results();
    out.results = collector.retained();
    check_run(out, master, collector, slaves);
    return out;
}

}// namespace

ForcedMoves force_move_at(std::uint64_t at) {
    return [at](std::uint64_t reorganization, const Master& master) -> std::vector<MoveInstruction> {
        if (reorganization != at) {
            return {};
        }
        const auto active = master.active_slaves();
        if (active.size() < 2) {
            return {};
        }
        for (auto it = active.begin(); it != active.end(); ++it) {
            const auto groups = master.buffer().groups_of(*it);
            if (groups.empty()) {
                continue;
            }
            auto next = std::next(it);
            if (next == active.end()) {
                next = active.begin();
            }
            return {MoveInstruction{*it, *next, *groups.rbegin()}};
        }
        return {};
    };
}

std::optional<std::string> check_batch_order(const std::vector<DeliveryRecord>& records) {
    std::optional<std::tuple<std::uint64_t, std::uint32_t, NodeId>> last;
    for (const auto& r : records) {
        if (r.kind != MessageKind::TupleBatch) {
            continue;
        }
        if (!r.slot) {
            return fmt::format("tuple batch to {} at {} ns outside a slot", r.receiver, r.virtual_time.count());
        }
        const auto key = std::make_tuple(r.epoch, *r.slot, r.receiver);
        if (last && !(*last < key)) {
            return fmt::format("tuple batch (epoch {}, slot {}, slave {}) out of order", r.epoch, *r.slot, r.receiver);
        }
        last = key;
    }
    return std::nullopt;
}

RunOutcome run_experiment(const ExperimentConfig& config, RunOptions options) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    auto out = config.backend == Backend::sim ? run_sim(config, std::move(options))
                                              : run_socket(config, std::move(options));
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

void RunOutcome::write_artifacts(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    events->write_csv(dir / "events.csv");
    metrics.write_csv(dir / "results.csv");
    record->write_csv(dir / "run_record.csv");
    std::ofstream cfg(dir / "config.cfg", std::ios::binary);
    cfg << config.to_text();
}

}// namespace wjoin
