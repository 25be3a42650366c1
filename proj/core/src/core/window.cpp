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

#include <wjoin/core/window.hpp>

#include <wjoin/core/errors.hpp>

#include <cassert>

namespace wjoin {

void WindowSpec::validate() const {
    if (w1.count() <= 0) {
        throw ConfigError("w1", "window length must be positive");
    }
    if (w2.count() <= 0) {
        throw ConfigError("w2", "window length must be positive");
    }
}

bool window_membership(Timestamp now, const Tuple& tuple, const WindowSpec& spec) {
    assert(now >= tuple.timestamp);
    return tuple.timestamp >= now - spec.for_stream(tuple.stream) && tuple.timestamp <= now;
}

bool joinable(const Tuple& a, const Tuple& b, const WindowSpec& spec) {
    if (a.stream == b.stream || a.join_key != b.join_key) {
        return false;
    }
    const Tuple& newer = a.timestamp >= b.timestamp ? a : b;
    const Tuple& older = a.timestamp >= b.timestamp ? b : a;
    return window_membership(newer.timestamp, older, spec);
}

}// namespace wjoin
