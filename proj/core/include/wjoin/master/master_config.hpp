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

#include <cstdint>

namespace wjoin {

struct EpochConfig {
    SimTime t_d{seconds(2)};
    SimTime t_r{seconds(20)};
    std::uint32_t n_g = 1;
    double th_sup = 0.5;
    double th_con = 0.01;
    double beta = 0.5;

    /// Distribution cycles per reorganization.
    std::uint64_t cycles_per_reorganization() const { return static_cast<std::uint64_t>(t_r / t_d); }

    void validate(std::uint32_t active_slaves) const;
};

struct MasterConfig {
    EpochConfig epochs;
    std::uint32_t n_part = 60;
    std::uint32_t n_slaves = 4;
    /// Slaves 1..initial_active start active; the rest start inactive.
    std::uint32_t initial_active = 4;
    std::size_t buffer_capacity_tuples = std::size_t{1} << 24;
    std::uint64_t seed = 1;
    /// Load balancing and declustering at reorganizations.
    bool adaptive = true;
    /// Arrivals stop here; one more cycle drains the buffers, then nodes shut down.
    SimTime run_end{seconds(1200)};
    IntervalGrid grid;

    NodeId collector() const { return static_cast<NodeId>(n_slaves + 1); }

    void validate() const;
};

}// namespace wjoin
