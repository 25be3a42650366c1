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

#include <wjoin/transport/clock.hpp>

#include <algorithm>
#include <limits>
#include <thread>

namespace wjoin {

TimeLedger::TimeLedger(IntervalGrid grid) : grid_(grid), intervals_(grid.count) {}

void TimeLedger::add(SimTime from, SimTime to, TimeUse use) {
    if (to <= from) {
        return;
    }
    std::lock_guard lock(mutex_);
    total_[use] += to - from;
    auto cursor = from;
    while (cursor < to) {
        const auto i = grid_.index(cursor);
        SimTime boundary = SimTime::max();
        if (i < 0) {
            boundary = grid_.warmup;
        } else if (static_cast<std::size_t>(i) + 1 < grid_.count) {
            boundary = grid_.end_of(static_cast<std::size_t>(i));
        }
        const auto seg_end = std::min(to, boundary);
        if (i >= 0) {
            intervals_[static_cast<std::size_t>(i)][use] += seg_end - cursor;
        }
        cursor = seg_end;
    }
}

TimeTotals TimeLedger::total() const {
    std::lock_guard lock(mutex_);
    return total_;
}

TimeTotals TimeLedger::interval(std::size_t i) const {
    std::lock_guard lock(mutex_);
    return i < intervals_.size() ? intervals_[i] : TimeTotals{};
}

void SimNodeClock::wait_until(SimTime t) {
    if (t > now_) {
        ledger_.add(now_, t, TimeUse::idle);
        now_ = t;
    }
}

void SimNodeClock::charge_busy(SimTime d) {
    ledger_.add(now_, now_ + d, TimeUse::busy);
    now_ += d;
}

void SimNodeClock::charge_comm(SimTime d) {
    ledger_.add(now_, now_ + d, TimeUse::comm);
    now_ += d;
}

RealNodeClock::RealNodeClock(IntervalGrid grid, std::chrono::steady_clock::time_point origin, double time_scale)
    : NodeClock(grid), origin_(origin), scale_(time_scale) {}

SimTime RealNodeClock::now() const {
    const auto wall = std::chrono::duration<double, std::nano>(std::chrono::steady_clock::now() - origin_).count();
    return SimTime(static_cast<std::int64_t>(wall * scale_) + offset_ns_.load());
}

void RealNodeClock::wait_until(SimTime t) {
    const auto from = now();
    if (t <= from) {
        return;
    }
    const auto wall_ns = static_cast<double>((t - from).count()) / scale_;
    std::this_thread::sleep_for(std::chrono::nanoseconds(static_cast<std::int64_t>(wall_ns)));
    ledger_.add(from, now(), TimeUse::idle);
}

void RealNodeClock::charge_busy(SimTime d) {
    const auto to = now();
    ledger_.add(to - d, to, TimeUse::busy);
}

void RealNodeClock::charge_comm(SimTime d) {
    const auto to = now();
    ledger_.add(to - d, to, TimeUse::comm);
}

void RealNodeClock::adopt(SimTime reference) {
    const auto local = now() - SimTime(offset_ns_.load());
    offset_ns_.store((reference - local).count());
}

}// namespace wjoin
