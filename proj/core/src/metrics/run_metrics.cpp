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

#include <wjoin/metrics/run_metrics.hpp>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <fstream>
#include <stdexcept>

namespace wjoin {

namespace {

std::string ms(SimTime t) { return fmt::format("{:.3f}", static_cast<double>(t.count()) / 1e6); }

}// namespace

const char* RunMetrics::csv_header() {
    return "lambda,n_slaves,n_g,t_d_sec,tuning,interval,start_sec,end_sec,results,avg_delay_ms,max_delay_ms,"
           "busy_ms_sum,busy_ms_min,busy_ms_max,idle_ms_sum,idle_ms_min,idle_ms_max,comm_ms_sum,comm_ms_min,"
           "comm_ms_max,busy_per_epoch_ms,peak_window_bytes,master_peak_tuples,moves,active_slaves,overloads";
}

void RunMetrics::write_rows(std::ostream& out) const {
    for (const auto& m : intervals) {
        fmt::print(out, "{},{},{},{},{},{},{:.3f},{:.3f},{},{},{},{},{},{},{},{},{},{},{},{},{:.3f},{},{},{},{},{}\n",
                   key.lambda, key.n_slaves, key.n_g, key.t_d_sec, key.tuning ? "on" : "off", m.index, m.start_sec,
                   m.end_sec, m.results, m.avg_delay_ms ? fmt::format("{:.3f}", *m.avg_delay_ms) : std::string(),
                   m.max_delay_ms ? fmt::format("{}", *m.max_delay_ms) : std::string(), ms(m.busy.sum),
                   ms(m.busy.min), ms(m.busy.max), ms(m.idle.sum), ms(m.idle.min), ms(m.idle.max), ms(m.comm.sum),
                   ms(m.comm.min), ms(m.comm.max), m.busy_per_epoch_ms, m.peak_window_bytes, m.master_peak_tuples,
                   m.moves, m.active_slaves, m.overloads);
    }
}

void RunMetrics::write_csv(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error(fmt::format("cannot write {}", path.string()));
    }
    out << csv_header() << '\n';
    write_rows(out);
}

}// namespace wjoin
