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
#include <wjoin_cli/cli.hpp>

#include <gtest/gtest.h>
#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace wjoin;
using namespace wjoin::cli;

namespace {

int invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "wjoin");
    std::vector<char*> argv;
    for (auto& a : args) {
        argv.push_back(a.data());
    }
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("wjoin_cli_" + name);
    std::filesystem::remove_all(p);
    return p;
}

const std::vector<std::string> kShortRun = {"--set", "duration_sec=20", "--set", "warmup_sec=10", "--set",
                                            "measure_sec=10", "--set", "w_minutes=0.1", "--set", "t_r_sec=4",
                                            "--set", "key_max=5000"};

std::vector<std::string> with_short(std::vector<std::string> args) {
    args.insert(args.end(), kShortRun.begin(), kShortRun.end());
    return args;
}

}// namespace

TEST(Sweep, ExpandsOneConfigPerValue) {
    ExperimentConfig base;
    base.n_slaves = 2;
    const auto configs = expand_sweep(base, {"lambda", {500, 1000, 1500}, {}});
    ASSERT_EQ(configs.size(), 3u);
    EXPECT_EQ(configs[1].lambda, 1000.0);
    EXPECT_EQ(configs[2].n_slaves, 2u);
    EXPECT_EQ(sweep_point_name(configs[0], "lambda"), "lambda=500_tuning=on");
}

TEST(Sweep, TuningAxisDoubles) {
    const auto configs = expand_sweep(ExperimentConfig{}, {"n_g", {1, 2}, {false, true}});
    ASSERT_EQ(configs.size(), 4u);
    EXPECT_FALSE(configs[0].tuning);
    EXPECT_TRUE(configs[3].tuning);
    EXPECT_EQ(configs[3].n_g, 2u);
}

TEST(Sweep, EpochAxisKeepsWholeReorganizationPeriod) {
    const auto configs = expand_sweep(ExperimentConfig{}, {"t_d", {0.5, 4}, {}});
    EXPECT_EQ(configs[0].t_r_sec, 5.0);
    EXPECT_EQ(configs[1].t_r_sec, 40.0);
}

TEST(Sweep, RejectsBadSpecs) {
    EXPECT_THROW(expand_sweep(ExperimentConfig{}, {"b", {0.5}, {}}), ConfigError);
    EXPECT_THROW(expand_sweep(ExperimentConfig{}, {"lambda", {}, {}}), ConfigError);
    EXPECT_THROW(expand_sweep(ExperimentConfig{}, {"n_slaves", {0}, {}}), ConfigError);
}

TEST(Cli, SweepWritesOneRowPerValue) {
    const auto out = scratch("sweep");
    const auto code = invoke(with_short({"sweep", "--axis", "lambda", "--values", "500,1000,1500", "--set",
                                         "n_slaves=2", "--out", out.string()}));
    EXPECT_EQ(code, kSuccess);
    const auto table = read_csv(out / "summary.csv");
    EXPECT_EQ(table.rows.size(), 3u);
    EXPECT_TRUE(std::filesystem::exists(out / "lambda=1000_tuning=on" / "events.csv"));
    const auto lam = table.column("lambda");
    EXPECT_EQ(table.rows[2][lam], "1500");
}

TEST(Cli, SameSeedGivesIdenticalSummary) {
    const auto a = scratch("det_a");
    const auto b = scratch("det_b");
    const auto args = with_short({"sweep", "--axis", "n_slaves", "--values", "1,2"});
    auto args_a = args;
    args_a.insert(args_a.end(), {"--out", a.string()});
    auto args_b = args;
    args_b.insert(args_b.end(), {"--out", b.string()});
    ASSERT_EQ(invoke(args_a), kSuccess);
    ASSERT_EQ(invoke(args_b), kSuccess);
    EXPECT_EQ(slurp(a / "summary.csv"), slurp(b / "summary.csv"));
    EXPECT_EQ(slurp(a / "n_slaves=2_tuning=on" / "events.csv"), slurp(b / "n_slaves=2_tuning=on" / "events.csv"));
}

TEST(Cli, OracleCheckAtLowRate) {
    const auto out = scratch("oracle");
    const auto code = invoke({"oracle-check", "--set", "lambda=50", "--set", "duration_sec=30", "--set",
                              "warmup_sec=0", "--set", "measure_sec=30", "--set", "w_minutes=0.2", "--set",
                              "t_r_sec=4", "--set", "key_max=2000", "--set", "force_move=1", "--out", out.string()});
    EXPECT_EQ(code, kSuccess);
    EXPECT_TRUE(std::filesystem::exists(out / "results.csv"));
}

TEST(Cli, TraceRoundTripReproducesRun) {
    const auto dir = scratch("trace");
    std::filesystem::create_directories(dir);
    const auto trace = (dir / "arrivals.bin").string();
    ASSERT_EQ(invoke(with_short({"run", "--trace-out", trace, "--out", (dir / "a").string()})), kSuccess);
    ASSERT_EQ(invoke(with_short({"run", "--trace-in", trace, "--set", "seed=99", "--out", (dir / "b").string()})),
              kSuccess);
    EXPECT_EQ(slurp(dir / "a" / "events.csv"), slurp(dir / "b" / "events.csv"));
}

TEST(Cli, ConfigErrorsExitWithTwo) {
    EXPECT_EQ(invoke({"run", "--set", "lambda=-3", "--out", scratch("bad").string()}), kConfigError);
    EXPECT_EQ(invoke({"run", "--set", "bogus=1", "--out", scratch("bad").string()}), kConfigError);
    EXPECT_EQ(invoke({"run", "--config", "/nonexistent/wjoin.cfg"}), kConfigError);
    EXPECT_EQ(invoke({"sweep", "--axis", "b", "--values", "0.5"}), kConfigError);
    EXPECT_EQ(invoke({"frobnicate"}), kConfigError);
}

TEST(Cli, ConfigFileWithOverrides) {
    const auto dir = scratch("cfgfile");
    std::filesystem::create_directories(dir);
    {
        std::ofstream f(dir / "exp.cfg");
        f << "lambda = 80\nn_slaves = 2\nduration_sec = 20\nwarmup_sec = 10\nmeasure_sec = 10\nw_minutes = 0.1\n"
             "t_r_sec = 4\n";
    }
    ASSERT_EQ(invoke({"run", "--config", (dir / "exp.cfg").string(), "--set", "lambda=120", "--out",
                      (dir / "out").string()}),
              kSuccess);
    const auto cfg = ExperimentConfig::load(dir / "out" / "config.cfg");
    EXPECT_EQ(cfg.lambda, 120.0);
    EXPECT_EQ(cfg.n_slaves, 2u);
}

TEST(Cli, OutputDirectoryFromEnvironment) {
    EXPECT_EQ(output_dir("explicit"), std::filesystem::path("explicit"));
    ::setenv(kOutDirEnv, "/tmp/from-env", 1);
    EXPECT_EQ(output_dir(""), std::filesystem::path("/tmp/from-env"));
    ::unsetenv(kOutDirEnv);
    EXPECT_EQ(output_dir(""), std::filesystem::path("wjoin-out"));
}

TEST(Plot, RendersOneLinePerSeries) {
    CsvTable t;
    t.header = {"lambda", "n_slaves", "avg_delay_ms"};
    t.rows = {{"500", "1", "10"}, {"1000", "1", "40"}, {"500", "2", "8"}, {"1000", "2", ""}};
    const auto svg = render_svg(t, "lambda", "avg_delay_ms", "n_slaves");
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    std::size_t lines = 0;
    for (auto pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) {
        ++lines;
    }
    EXPECT_EQ(lines, 2u);
    EXPECT_NE(svg.find("n_slaves=2"), std::string::npos);
    EXPECT_THROW(render_svg(t, "lambda", "nope", ""), ConfigError);
}

TEST(Plot, SubcommandWritesFile) {
    const auto out = scratch("plot");
    ASSERT_EQ(invoke(with_short({"sweep", "--axis", "lambda", "--values", "100,200", "--out", out.string()})),
              kSuccess);
    const auto svg = (out / "delay.svg").string();
    EXPECT_EQ(invoke({"plot", "--input", (out / "summary.csv").string(), "-x", "lambda", "-y", "busy_per_epoch_ms",
                      "--out", svg}),
              kSuccess);
    EXPECT_NE(slurp(svg).find("</svg>"), std::string::npos);
}
