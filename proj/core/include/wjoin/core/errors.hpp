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

#include <stdexcept>
#include <string>

namespace wjoin {

/// A node received a message it cannot act on: unknown group, malformed payload,
/// missing report, ack timeout.
class ProtocolFault : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A buffer (master or slave) cannot hold what it is asked to hold.
class OverloadFault : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A message was sent outside the fixed communication schedule.
class SlotViolation : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::invalid_argument {
  public:
    ConfigError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

  private:
    std::string field_;
};

}// namespace wjoin
