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

#include <wjoin/runtime/experiment_config.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace wjoin::cli {

enum ExitCode : int { kSuccess = 0, kInvariantViolation = 1, kConfigError = 2 };

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "WJOIN_OUT_DIR";

/// Output directory: the explicit flag, else $WJOIN_OUT_DIR, else ./wjoin-out.
std::filesystem::path output_dir(const std::string& flag);

/// Applies `key=value` overrides on top of a config.
ExperimentConfig apply_overrides(ExperimentConfig base, const std::vector<std::string>& overrides);

struct SweepSpec {
    std::string axis;
    std::vector<double> values;
    std::vector<bool> tuning;
};

/// One config per (tuning, value), in that nesting order. Raises ConfigError on an unknown
/// axis or an empty value list.
std::vector<ExperimentConfig> expand_sweep(const ExperimentConfig& base, const SweepSpec& spec);

/// Directory name of one sweep point, e.g. "lambda=1500_tuning=on".
std::string sweep_point_name(const ExperimentConfig& config, const std::string& axis);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

/// Line chart of `y` against `x`, one line per distinct value of `series` (all rows in one line
/// when `series` is empty). Rows with an empty y value are skipped.
std::string render_svg(const CsvTable& table, const std::string& x, const std::string& y, const std::string& series);

/// Entry point of the `wjoin` executable.
int run_cli(int argc, char** argv);

}// namespace wjoin::cli
