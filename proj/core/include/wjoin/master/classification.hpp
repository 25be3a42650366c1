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

#include <wjoin/core/types.hpp>
#include <wjoin/transport/protocol.hpp>

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

namespace wjoin {

enum class Classification { supplier, consumer, neutral };

const char* classification_name(Classification c);

/// supplier iff f > th_sup, consumer iff f < th_con, otherwise neutral.
Classification classify(double occupancy, double th_sup, double th_con);

struct NodeState {
    NodeId slave_id = 0;
    bool active = true;
    double occupancy = 0.0;
    Classification classification = Classification::neutral;
    std::set<GroupId> groups;
};

struct LoadReportEntry {
    NodeId slave_id = 0;
    double occupancy = 0.0;
};

/// One state per active slave, in ascending id. A missing or duplicate report, or one from a
/// slave that is not active, raises ProtocolFault.
std::vector<NodeState> classify_slaves(const std::vector<LoadReportEntry>& reports,
                                       const std::map<NodeId, std::set<GroupId>>& active_groups, double th_sup,
                                       double th_con);

/// Pairs suppliers with consumers in one ascending-id scan; each pair moves one group chosen
/// uniformly from the supplier's groups. Suppliers without groups are skipped.
std::vector<MoveInstruction> plan_reorganization(const std::vector<NodeState>& states, std::mt19937_64& rng);

enum class DeclusterAction { increase, decrease, hold };

const char* decluster_name(DeclusterAction a);

/// decrease when there is no supplier, increase when N_sup > beta * N_con, else hold.
DeclusterAction adjust_declustering(const std::vector<NodeState>& states, double beta);

/// Peak per-stream master buffer for rate r over an epoch t_d split into n_g slots:
/// (r * t_d / 2) * (1 + 1 / n_g).
double predicted_peak_buffer(double rate, double t_d_sec, std::uint32_t n_g);

}// namespace wjoin
