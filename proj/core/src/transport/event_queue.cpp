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

#include <wjoin/transport/event_queue.hpp>

#include <stdexcept>

namespace wjoin {

std::uint64_t EventQueue::schedule(SimTime at, NodeId sender, Callback cb) {
    if (at < now_) {
        throw std::logic_error("event scheduled in the past");
    }
    const auto seq = next_seq_++;
    heap_.push(Event{at, sender, seq, std::move(cb)});
    return seq;
}

std::size_t EventQueue::advance_clock(SimTime until) {
    std::size_t fired = 0;
    while (!heap_.empty() && heap_.top().at <= until) {
        auto ev = heap_.top();
        heap_.pop();
        now_ = ev.at;
        ev.cb();
        ++fired;
    }
    if (until > now_) {
        now_ = until;
    }
    return fired;
}

std::optional<SimTime> EventQueue::next_time() const {
    if (heap_.empty()) {
        return std::nullopt;
    }
    return heap_.top().at;
}

}// namespace wjoin
