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
#include <wjoin/master/classification.hpp>

#include <algorithm>
#include <fmt/format.h>

namespace wjoin {

const char* classification_name(Classification c) {
    switch (c) {
        case Classification::supplier: return "supplier";
        case Classification::consumer: return "consumer";
        case Classification::neutral: return "neutral";
    }
    return "unknown";
}

Classification classify(double occupancy, double th_sup, double th_con) {
    if (occupancy > th_sup) {
        return Classification::supplier;
    }
    if (occupancy < th_con) {
        return Classification::consumer;
    }
    return Classification::neutral;
}

std::vector<NodeState> classify_slaves(const std::vector<LoadReportEntry>& reports,
                                       const std::map<NodeId, std::set<GroupId>>& active_groups, double th_sup,
                                       double th_con) {
    std::map<NodeId, double> by_slave;
    for (const auto& r : reports) {
        if (!active_groups.contains(r.slave_id)) {
            throw ProtocolFault(fmt::format("load report from inactive slave {}", r.slave_id));
        }
        if (!(r.occupancy >= 0.0 && r.occupancy <= 1.0)) {
            throw ProtocolFault(fmt::format("load report {} from slave {} outside [0, 1]", r.occupancy, r.slave_id));
        }
        if (!by_slave.emplace(r.slave_id, r.occupancy).second) {
            throw ProtocolFault(fmt::format("duplicate load report from slave {}", r.slave_id));
        }
    }
    std::vector<NodeState> states;
    for (const auto& [id, groups] : active_groups) {
        auto it = by_slave.find(id);
        if (it == by_slave.end()) {
            throw ProtocolFault(fmt::format("missing load report from slave {}", id));
        }
        states.push_back({id, true, it->second, classify(it->second, th_sup, th_con), groups});
    }
    return states;
}

std::vector<MoveInstruction> plan_reorganization(const std::vector<NodeState>& states, std::mt19937_64& rng) {
    std::vector<const NodeState*> suppliers;
    std::vector<const NodeState*> consumers;
    for (const auto& s : states) {
        if (s.classification == Classification::supplier && !s.groups.empty()) {
            suppliers.push_back(&s);
        } else if (s.classification == Classification::consumer) {
            consumers.push_back(&s);
        }
    }
    const auto by_id = [](const NodeState* a, const NodeState* b) { return a->slave_id < b->slave_id; };
    std::sort(suppliers.begin(), suppliers.end(), by_id);
    std::sort(consumers.begin(), consumers.end(), by_id);

    std::vector<MoveInstruction> plan;
    for (std::size_t i = 0; i < std::min(suppliers.size(), consumers.size()); ++i) {
        const auto& groups = suppliers[i]->groups;
        std::uniform_int_distribution<std::size_t> pick(0, groups.size() - 1);
        const auto g = *std::next(groups.begin(), static_cast<std::ptrdiff_t>(pick(rng)));
        plan.push_back({suppliers[i]->slave_id, consumers[i]->slave_id, g});
    }
    return plan;
}

const char* decluster_name(DeclusterAction a) {
    switch (a) {
        case DeclusterAction::increase: return "increase";
        case DeclusterAction::decrease: return "decrease";
        case DeclusterAction::hold: return "hold";
    }
    return "unknown";
}

DeclusterAction adjust_declustering(const std::vector<NodeState>& states, double beta) {
    std::size_t n_sup = 0;
    std::size_t n_con = 0;
    for (const auto& s : states) {
        n_sup += s.classification == Classification::supplier;
        n_con += s.classification == Classification::consumer;
    }
    if (n_sup == 0) {
        return DeclusterAction::decrease;
    }
    if (static_cast<double>(n_sup) > beta * static_cast<double>(n_con)) {
        return DeclusterAction::increase;
    }
    return DeclusterAction::hold;
}

double predicted_peak_buffer(double rate, double t_d_sec, std::uint32_t n_g) {
    return rate * t_d_sec / 2.0 * (1.0 + 1.0 / static_cast<double>(n_g));
}

}// namespace wjoin
