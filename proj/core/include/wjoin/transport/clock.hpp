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

#include <wjoin/core/interval_grid.hpp>
#include <wjoin/core/types.hpp>

#include <atomic>
#include <chrono>
#include <mutex>
#include <vector>

namespace wjoin {

enum class TimeUse : std::uint8_t { busy, idle, comm };

struct TimeTotals {
    SimTime busy{0};
    SimTime idle{0};
    SimTime comm{0};

    SimTime sum() const { return busy + idle + comm; }
    SimTime& operator[](TimeUse use) { return use == TimeUse::busy ? busy : use == TimeUse::idle ? idle : comm; }

    friend bool operator==(const TimeTotals&, const TimeTotals&) = default;
};

/// Accumulates busy/idle/communication time, in total and per measurement interval.
/// A span that crosses an interval boundary is split at the boundary.
class TimeLedger {
  public:
    explicit TimeLedger(IntervalGrid grid);

    void add(SimTime from, SimTime to, TimeUse use);

    TimeTotals total() const;
    TimeTotals interval(std::size_t i) const;

  private:
    IntervalGrid grid_;
    mutable std::mutex mutex_;
    TimeTotals total_;
    std::vector<TimeTotals> intervals_;
};

/// Per-node time source. Everything a node does advances or is recorded against its clock.
class NodeClock {
  public:
    explicit NodeClock(IntervalGrid grid) : ledger_(grid) {}
    virtual ~NodeClock() = default;

    virtual SimTime now() const = 0;
    /// Idles until `t`; no-op when the clock is already past it.
    virtual void wait_until(SimTime t) = 0;
    virtual void charge_busy(SimTime d) = 0;
    virtual void charge_comm(SimTime d) = 0;
    /// True when time only moves through charges (simulation).
    virtual bool is_virtual() const = 0;
    /// Aligns this clock with a reference reading from the master.
    virtual void adopt(SimTime /*reference*/) {}

    const TimeLedger& ledger() const { return ledger_; }

  protected:
    TimeLedger ledger_;
};

class SimNodeClock final : public NodeClock {
  public:
    explicit SimNodeClock(IntervalGrid grid, SimTime start = SimTime{0}) : NodeClock(grid), now_(start) {}

    SimTime now() const override { return now_; }
    void wait_until(SimTime t) override;
    void charge_busy(SimTime d) override;
    void charge_comm(SimTime d) override;
    bool is_virtual() const override { return true; }

  private:
    SimTime now_;
};

/// Scaled wall clock: virtual time = (steady_clock - origin) * time_scale + offset.
/// Charges record already-elapsed wall time; they do not move the clock.
class RealNodeClock final : public NodeClock {
  public:
    RealNodeClock(IntervalGrid grid, std::chrono::steady_clock::time_point origin, double time_scale);

    SimTime now() const override;
    void wait_until(SimTime t) override;
    void charge_busy(SimTime d) override;
    void charge_comm(SimTime d) override;
    bool is_virtual() const override { return false; }
    void adopt(SimTime reference) override;

  private:
    std::chrono::steady_clock::time_point origin_;
    double scale_;
    std::atomic<std::int64_t> offset_ns_{0};
};

}// namespace wjoin
