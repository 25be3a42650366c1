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
#include <wjoin/runtime/cluster.hpp>
#include <wjoin_cli/cli.hpp>
#include <wjoin_oracle/oracle.hpp>

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace wjoin::cli {

std::filesystem::path output_dir(const std::string& flag) {
    if (!flag.empty()) {
        return flag;
    }
    if (const char* env = std::getenv(kOutDirEnv); env && *env) {
        return env;
    }
    return "wjoin-out";
}

ExperimentConfig apply_overrides(ExperimentConfig base, const std::vector<std::string>& overrides) {
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(o, "override must be key=value");
        }
        base.set(o.substr(0, eq), o.substr(eq + 1));
    }
    return base;
}

std::vector<ExperimentConfig> expand_sweep(const ExperimentConfig& base, const SweepSpec& spec) {
    static const std::set<std::string> axes = {"lambda", "n_slaves", "t_d", "n_g"};
    if (!axes.contains(spec.axis)) {
        throw ConfigError("axis", fmt::format("'{}' is not one of lambda, n_slaves, t_d, n_g", spec.axis));
    }
    if (spec.values.empty()) {
        throw ConfigError("values", "sweep needs at least one value");
    }
    const auto tunings = spec.tuning.empty() ? std::vector<bool>{base.tuning} : spec.tuning;
    std::vector<ExperimentConfig> out;
    for (const bool tuning : tunings) {
        for (const double v : spec.values) {
            auto c = base;
            c.tuning = tuning;
            const auto text = fmt::format("{}", v);
            if (spec.axis == "t_d") {
                // Keep the reorganization period a whole number of distribution epochs.
                const double cycles = std::max(1.0, std::round(base.t_r_sec / base.t_d_sec));
                c.set("t_d_sec", text);
                c.t_r_sec = cycles * c.t_d_sec;
            } else {
                c.set(spec.axis, text);
            }
            c.validate();
            out.push_back(c);
        }
    }
    return out;
}

std::string sweep_point_name(const ExperimentConfig& c, const std::string& axis) {
    std::string value;
    if (axis == "lambda") {
        value = fmt::format("{}", c.lambda);
    } else if (axis == "n_slaves") {
        value = fmt::format("{}", c.n_slaves);
    } else if (axis == "t_d") {
        value = fmt::format("{}", c.t_d_sec);
    } else {
        value = fmt::format("{}", c.n_g);
    }
    return fmt::format("{}={}_tuning={}", axis, value, c.tuning ? "on" : "off");
}

std::size_t CsvTable::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw ConfigError(name, "no such column");
    }
    return static_cast<std::size_t>(it - header.begin());
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("input", fmt::format("cannot read {}", path.string()));
    }
    const auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        if (!line.empty() && line.back() == ',') {
            cells.emplace_back();
        }
        return cells;
    };
    CsvTable t;
    std::string line;
    if (std::getline(in, line)) {
        t.header = split(line);
    }
    while (std::getline(in, line)) {
        if (!line.empty()) {
            t.rows.push_back(split(line));
        }
    }
    return t;
}

std::string render_svg(const CsvTable& table, const std::string& x, const std::string& y, const std::string& series) {
    const auto xi = table.column(x);
    const auto yi = table.column(y);
    const bool has_series = !series.empty();
    const std::size_t si = has_series ? table.column(series) : 0;
    std::map<std::string, std::vector<std::pair<double, double>>> lines;
    for (const auto& row : table.rows) {
        if (row.size() <= std::max(xi, yi) || row[yi].empty()) {
            continue;
        }
        const auto name = has_series && si < row.size() ? fmt::format("{}={}", series, row[si]) : y;
        lines[name].emplace_back(std::stod(row[xi]), std::stod(row[yi]));
    }
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    bool first = true;
    for (auto& [_, pts] : lines) {
        std::sort(pts.begin(), pts.end());
        for (const auto& [px, py] : pts) {
            if (first) {
                x0 = x1 = px;
                y1 = py;
                first = false;
            }
            x0 = std::min(x0, px);
            x1 = std::max(x1, px);
            y1 = std::max(y1, py);
        }
    }
    y0 = 0.0;
    if (x1 == x0) {
        x1 = x0 + 1;
    }
    if (y1 == y0) {
        y1 = y0 + 1;
    }
    constexpr double W = 640, H = 420, L = 70, R = 160, T = 20, B = 50;
    const auto sx = [&](double v) { return L + (v - x0) / (x1 - x0) * (W - L - R); };
    const auto sy = [&](double v) { return H - B - (v - y0) / (y1 - y0) * (H - T - B); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" "
        "font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        W, H);
    svg += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n", L, H - B, W - R, H - B);
    svg += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n", L, T, L, H - B);
    for (int i = 0; i <= 4; ++i) {
        const double xv = x0 + (x1 - x0) * i / 4.0;
        const double yv = y0 + (y1 - y0) * i / 4.0;
        svg += fmt::format("<text x=\"{:.1f}\" y=\"{}\" text-anchor=\"middle\">{:.4g}</text>\n", sx(xv), H - B + 18, xv);
        svg += fmt::format("<text x=\"{}\" y=\"{:.1f}\" text-anchor=\"end\">{:.4g}</text>\n", L - 6, sy(yv) + 4, yv);
    }
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", (L + W - R) / 2, H - 10, x);
    svg += fmt::format("<text x=\"14\" y=\"{}\" transform=\"rotate(-90 14 {})\" text-anchor=\"middle\">{}</text>\n",
                       (T + H - B) / 2, (T + H - B) / 2, y);
    std::size_t k = 0;
    for (const auto& [name, pts] : lines) {
        const auto* color = colors[k % std::size(colors)];
        std::string path;
        for (const auto& [px, py] : pts) {
            path += fmt::format("{:.1f},{:.1f} ", sx(px), sy(py));
        }
        svg += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>\n", color, path);
        for (const auto& [px, py] : pts) {
            svg += fmt::format("<circle cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"3\" fill=\"{}\"/>\n", sx(px), sy(py), color);
        }
        svg += fmt::format("<text x=\"{}\" y=\"{}\" fill=\"{}\">{}</text>\n", W - R + 10, T + 16 * (k + 1), color, name);
        ++k;
    }
    svg += "</svg>\n";
    return svg;
}

namespace {

struct CommonOptions {
    std::string config;
    std::vector<std::string> overrides;
    std::string out;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("-c,--config", o.config, "key=value configuration file");
    cmd->add_option("-s,--set", o.overrides, "override one key, e.g. --set lambda=500")->take_all();
    cmd->add_option("-o,--out", o.out, fmt::format("output directory (default ${} or ./wjoin-out)", kOutDirEnv));
}

ExperimentConfig load_config(const CommonOptions& o) {
    auto cfg = o.config.empty() ? ExperimentConfig{} : ExperimentConfig::load(o.config);
    cfg = apply_overrides(cfg, o.overrides);
    cfg.validate();
    return cfg;
}

void print_outcome(const RunOutcome& r) {
    fmt::print("run finished in {:.2f} s wall: {} results, {} tuples distributed, {} moves, {} reorganizations\n",
               r.wall_seconds, r.total_results, r.master.tuples_sent, r.master.moves, r.master.reorganizations);
    for (const auto& m : r.metrics.intervals) {
        fmt::print("  interval {} [{:.0f}s, {:.0f}s): avg delay {} ms, busy/epoch {:.3f} ms, master peak {} tuples, "
                   "{} active\n",
                   m.index, m.start_sec, m.end_sec, m.avg_delay_ms ? fmt::format("{:.1f}", *m.avg_delay_ms) : "n/a",
                   m.busy_per_epoch_ms, m.master_peak_tuples, m.active_slaves);
    }
    for (const auto& v : r.violations) {
        fmt::print(stderr, "invariant violation: {}\n", v);
    }
}

int do_run(const CommonOptions& o, const std::string& trace_in, const std::string& trace_out, bool oracle_check) {
    const auto cfg = load_config(o);
    RunOptions options;
    options.retain_results = oracle_check;
    std::vector<Arrival> arrivals;
    if (!trace_in.empty()) {
        arrivals = read_trace(trace_in);
    } else if (!trace_out.empty() || oracle_check) {
        SyntheticFeed feed(cfg.workload(), seconds(cfg.duration_sec));
        arrivals = drain_source(feed);
    }
    if (!trace_out.empty()) {
        write_trace(trace_out, arrivals);
    }
    if (!trace_in.empty() || !trace_out.empty() || oracle_check) {
        options.arrivals = arrivals;
    }
    const auto outcome = run_experiment(cfg, std::move(options));
    const auto dir = output_dir(o.out);
    outcome.write_artifacts(dir);
    print_outcome(outcome);
    fmt::print("artifacts written to {}\n", dir.string());
    int code = outcome.ok() ? kSuccess : kInvariantViolation;
    if (oracle_check) {
        const auto engine = cfg.engine();
        const auto expected = oracle::brute_force_join(arrivals, engine.windows.w1.count(), engine.windows.w2.count());
        const auto cmp = oracle::compare(outcome.results, expected, arrivals);
        fmt::print("oracle: {} -> {}\n", cmp.summary(), cmp.equal() ? "match" : "MISMATCH");
        if (!cmp.equal()) {
            code = kInvariantViolation;
        }
    }
    return code;
}

std::vector<double> parse_values(const std::string& list) {
    std::vector<double> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError("values", fmt::format("'{}' is not a number", item));
        }
    }
    return out;
}

int do_sweep(const CommonOptions& o, const std::string& axis, const std::string& values, const std::string& tuning) {
    const auto base = load_config(o);
    SweepSpec spec{axis, parse_values(values), {}};
    if (tuning == "both") {
        spec.tuning = {false, true};
    } else if (tuning == "on" || tuning == "off") {
        spec.tuning = {tuning == "on"};
    } else if (!tuning.empty()) {
        throw ConfigError("tuning", "expected on, off or both");
    }
    const auto configs = expand_sweep(base, spec);
    const auto dir = output_dir(o.out);
    std::filesystem::create_directories(dir);
    std::ofstream summary(dir / "summary.csv", std::ios::binary);
    summary << RunMetrics::csv_header() << '\n';
    int code = kSuccess;
    for (const auto& cfg : configs) {
        const auto name = sweep_point_name(cfg, axis);
        fmt::print("== {}\n", name);
        const auto outcome = run_experiment(cfg);
        outcome.write_artifacts(dir / name);
        outcome.metrics.write_rows(summary);
        print_outcome(outcome);
        if (!outcome.ok()) {
            code = kInvariantViolation;
        }
    }
    fmt::print("summary written to {}\n", (dir / "summary.csv").string());
    return code;
}

int do_plot(const std::string& input, const std::string& x, const std::string& y, const std::string& series,
            const std::string& out) {
    const auto table = read_csv(input);
    const auto svg = render_svg(table, x, y, series);
    std::ofstream f(out, std::ios::binary);
    if (!f) {
        throw ConfigError("out", fmt::format("cannot write {}", out));
    }
    f << svg;
    fmt::print("plot written to {}\n", out);
    return kSuccess;
}

}// namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"Distributed sliding-window join: simulation and experiment driver"};
    app.require_subcommand(1);

    CommonOptions run_opts;
    std::string trace_in;
    std::string trace_out;
    bool oracle_flag = false;
    auto* run = app.add_subcommand("run", "run one experiment and write its CSVs");
    add_common(run, run_opts);
    run->add_option("--trace-in", trace_in, "replay arrivals from a trace file");
    run->add_option("--trace-out", trace_out, "write the generated arrivals to a trace file");
    run->add_flag("--oracle", oracle_flag, "compare the output with a brute-force join");

    CommonOptions sweep_opts;
    std::string axis;
    std::string values;
    std::string tuning;
    auto* sweep = app.add_subcommand("sweep", "run one experiment per value of a sweep axis");
    add_common(sweep, sweep_opts);
    sweep->add_option("--axis", axis, "lambda, n_slaves, t_d or n_g")->required();
    sweep->add_option("--values", values, "comma-separated axis values")->required();
    sweep->add_option("--tuning", tuning, "on, off or both (default: config value)");

    CommonOptions check_opts;
    auto* check = app.add_subcommand("oracle-check", "run and compare the output set with a brute-force join");
    add_common(check, check_opts);

    std::string input;
    std::string px = "lambda";
    std::string py = "avg_delay_ms";
    std::string series;
    std::string plot_out = "plot.svg";
    auto* plot = app.add_subcommand("plot", "draw an SVG line chart from a results or summary CSV");
    plot->add_option("-i,--input", input, "results.csv or summary.csv")->required();
    plot->add_option("-x", px, "x column");
    plot->add_option("-y", py, "y column");
    plot->add_option("--series", series, "column distinguishing lines, e.g. n_slaves or tuning");
    plot->add_option("-o,--out", plot_out, "SVG file to write");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kSuccess : kConfigError;
    }

    try {
        if (*run) {
            return do_run(run_opts, trace_in, trace_out, oracle_flag);
        }
        if (*sweep) {
            return do_sweep(sweep_opts, axis, values, tuning);
        }
        if (*check) {
            return do_run(check_opts, "", "", true);
        }
        return do_plot(input, px, py, series, plot_out);
    } catch (const ConfigError& e) {
        fmt::print(stderr, "configuration error in {}: {}\n", e.field(), e.what());
        return kConfigError;
    } catch (const std::exception& e) {
        fmt::print(stderr, "run failed: {}\n", e.what());
        return kInvariantViolation;
    }
}

}// namespace wjoin::cli
