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
#include <wjoin/master/master_config.hpp>

namespace wjoin {

void EpochConfig::validate(std::uint32_t active_slaves) const {
    if (t_d <= SimTime{0}) {
        throw ConfigError("t_d_sec", "distribution epoch must be positive");
    }
    if (t_r < t_d || t_r.count() % t_d.count() != 0) {
        throw ConfigError("t_r_sec", "reorganization epoch must be a positive multiple of t_d");
    }
    if (n_g < 1 || n_g > active_slaves) {
        throw ConfigError("n_g", "sub-group count must lie in [1, active slaves]");
    }
    if (!(th_con >= 0.0 && th_con < th_sup && th_sup < 1.0)) {
        throw ConfigError("th_sup", "thresholds must satisfy 0 <= th_con < th_sup < 1");
    }
    if (!(beta > 0.0 && beta < 1.0)) {
        throw ConfigError("beta", "must lie in (0, 1)");
    }
}

void MasterConfig::validate() const {
    if (n_slaves < 1 || n_slaves > 1000) {
        throw ConfigError("n_slaves", "must lie in [1, 1000]");
    }
    if (initial_active < 1 || initial_active > n_slaves) {
        throw ConfigError("initial_active", "must lie in [1, n_slaves]");
    }
    if (n_part < 1) {
        throw ConfigError("n_part", "must be at least 1");
    }
    if (run_end <= SimTime{0}) {
        throw ConfigError("duration_sec", "run length must be positive");
    }
    epochs.validate(initial_active);
}

}// namespace wjoin
