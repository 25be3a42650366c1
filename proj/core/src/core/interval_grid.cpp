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
#include <wjoin/core/interval_grid.hpp>

namespace wjoin {

IntervalGrid IntervalGrid::make(SimTime warmup, SimTime length, SimTime run_end) {
    if (length <= SimTime{0}) {
        throw ConfigError("measure_sec", "measurement interval must be positive");
    }
    if (warmup < SimTime{0} || run_end <= warmup) {
        throw ConfigError("warmup_sec", "no measurement window after warmup");
    }
    IntervalGrid g;
    g.warmup = warmup;
    g.length = length;
    g.end = run_end;
    g.count = static_cast<std::size_t>((run_end - warmup + length - SimTime{1}) / length);
    return g;
}

}// namespace wjoin
