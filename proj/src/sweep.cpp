#include "rydsim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "rydsim/config.hpp"
#include "rydsim/errors.hpp"

namespace rydsim {

namespace {

SweepRow run_one(const ScenarioConfig& base, const std::string& axis, const std::string& value)
{
    SweepRow row;
    row.value = value;
    try {
        ScenarioConfig cfg = base;
        apply_override(cfg, axis, value);
        cfg.output = OutputSpec{};
        const double t_s = cfg.control.t_c + 2.0 * cfg.control.tau_c;
        cfg.output.snapshot_times = {t_s};
        cfg.output.dump_start = t_s;
        cfg.output.dump_end = std::min(cfg.control.hold_until, cfg.grid.t_end);
        cfg.output.dump_stride = 50;
        cfg.output.heatmap_rows = 1;
        cfg.output.heatmap_cols = 1;
        row.summary = summarize(run_scenario(cfg));
        row.ok = true;
    } catch (const ConfigError& e) {
        row.error = e.what();
        for (const auto& d : e.diagnostics()) {
            row.error += " [" + d.path + ": " + d.reason + "]";
        }
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        out += c == '"' ? std::string("\"\"") : std::string(1, c == '\n' ? ' ' : c);
    }
    return out + "\"";
}

}  // namespace

SweepResult run_sweep(const ScenarioConfig& base, const std::string& axis,
                      const std::vector<std::string>& values, std::size_t jobs)
{
    SweepResult result;
    result.axis = axis;
    result.rows.resize(values.size());
    if (values.empty()) {
        return result;
    }
    if (jobs == 0) {
        jobs = std::max(1u, std::thread::hardware_concurrency());
    }
    jobs = std::min(jobs, values.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < values.size(); i = next++) {
            result.rows[i] = run_one(base, axis, values[i]);
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < jobs; ++w) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }
    return result;
}

std::string sweep_csv(const SweepResult& result)
{
    std::string text = "axis,value,status,error," + summary_csv_header() + "\n";
    for (const auto& row : result.rows) {
        text += csv_escape(result.axis) + "," + csv_escape(row.value) + "," +
                (row.ok ? "ok" : "failed") + "," + csv_escape(row.error) + "," +
                (row.ok ? summary_csv_row(row.summary) : std::string(",,,,,,,")) + "\n";
    }
    return text;
}

}  // namespace rydsim
