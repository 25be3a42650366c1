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
#include <wjoin/engine/engine_config.hpp>

namespace wjoin {

void EngineConfig::validate() const {
    windows.validate();
    if (n_part == 0) {
        throw ConfigError("n_part", "must be at least 1");
    }
    if (block_bytes < kTupleWireBytes) {
        throw ConfigError("block_kb", "block must hold at least one tuple");
    }
    if (theta_blocks == 0) {
        throw ConfigError("theta_mb", "tuning threshold must be at least one block");
    }
    if (max_depth > 16) {
        throw ConfigError("max_depth", "must be at most 16");
    }
    if (buffer_bytes < kTupleWireBytes) {
        throw ConfigError("buffer_mb", "buffer must hold at least one tuple");
    }
}

}// namespace wjoin
