#include "rydsim/output.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "rydsim/config.hpp"
#include "rydsim/errors.hpp"
#include "rydsim/presets.hpp"

namespace rydsim {

namespace fs = std::filesystem;

namespace {

constexpr const char* kFieldNames[] = {"e1", "s1", "e2", "s2"};

void append(std::string& out, const char* fmt, double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, fmt, x);
    out += buf;
}

void ensure_dir(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError("cannot create output directory " + dir.string() +
                      (ec ? ": " + ec.message() : ""));
    }
}

std::string snapshot_name(double t)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "snapshots/t%09.3f.csv", t);
    return buf;
}

}  // namespace

std::string_view field_name(FieldSelector f) { return kFieldNames[static_cast<int>(f)]; }

FieldSelector parse_field(std::string_view name)
{
    for (int i = 0; i < 4; ++i) {
        if (name == kFieldNames[i]) {
            return static_cast<FieldSelector>(i);
        }
    }
    throw ConfigError("field", "unknown field '" + std::string(name) + "' (expected e1, s1, e2, s2)");
}

void write_text_file(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    out << text;
    out.flush();
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
}

void write_snapshot_csv(const FieldState& state, double dz, const std::string& hash,
                        std::ostream& out)
{
    std::string text = "# config_hash=" + hash + "\n";
    append(text, "# t=%.17g\n", state.t);
    text += "z,abs_e1,arg_e1,abs_s1,arg_s1,v1,abs_e2,arg_e2,abs_s2,arg_s2,v2\n";
    for (std::size_t j = 0; j < state.nodes(); ++j) {
        append(text, "%.17g", static_cast<double>(j) * dz);
        for (const auto& f : state.ensemble) {
            append(text, ",%.17g", std::abs(f.e[j]));
            append(text, ",%.17g", std::arg(f.e[j]));
            append(text, ",%.17g", std::abs(f.s[j]));
            append(text, ",%.17g", std::arg(f.s[j]));
            append(text, ",%.17g", f.v[j]);
        }
        text += '\n';
    }
    out << text;
}

void write_timeseries_csv(const SnapshotSeries& series, const std::string& hash,
                          std::ostream& out)
{
    std::string text = "# config_hash=" + hash + "\n";
    text += "t,omega_c,abs_e_entry";
    for (int l = 1; l <= 2; ++l) {
        const std::string k = std::to_string(l);
        text += ",abs_e_exit" + k + ",arg_e_exit" + k + ",s_max" + k + ",s_peak_z" + k +
                ",s_norm" + k + ",p_norm" + k + ",v_max" + k;
    }
    text += '\n';
    for (const auto& r : series.steps) {
        append(text, "%.17g", r.t);
        append(text, ",%.17g", r.omega_c);
        append(text, ",%.17g", std::abs(r.ensemble[0].e_entry));
        for (const auto& e : r.ensemble) {
            append(text, ",%.17g", std::abs(e.e_exit));
            append(text, ",%.17g", std::arg(e.e_exit));
            append(text, ",%.17g", e.s_max);
            append(text, ",%.17g", e.s_peak_z);
            append(text, ",%.17g", e.s_norm);
            append(text, ",%.17g", e.p_norm);
            append(text, ",%.17g", e.v_max_abs);
        }
        text += '\n';
    }
    out << text;
}

double write_heatmap(const Heatmap& map, const std::string& hash, const std::string& label,
                     const fs::path& path)
{
    double max = 0.0;
    for (float x : map.data) {
        max = std::max(max, static_cast<double>(x));
    }
    std::string header = "P6\n# config_hash=" + hash + "\n";
    append(header, "# max=%.17g\n", max);
    header += std::to_string(map.cols) + " " + std::to_string(map.rows) + "\n255\n";
    std::string pixels;
    pixels.reserve(map.data.size() * 3);
    for (float x : map.data) {
        const double level = max > 0.0 ? std::round(255.0 * static_cast<double>(x) / max) : 0.0;
        const char byte = static_cast<char>(static_cast<unsigned char>(level));
        pixels.append(3, byte);
    }
    write_text_file(path, header + pixels);

    std::string side = "# config_hash=" + hash + "\n";
    side += "field=" + label + "\n";
    append(side, "max=%.17g\n", max);
    side += "rows=" + std::to_string(map.rows) + "\ncols=" + std::to_string(map.cols) + "\n";
    append(side, "dz=%.17g\n", map.dz);
    append(side, "t_first=%.17g\n", map.times.empty() ? 0.0 : map.times.front());
    append(side, "t_last=%.17g\n", map.times.empty() ? 0.0 : map.times.back());
    side += "axes=rows:t,cols:z\n";
    write_text_file(fs::path(path.string() + ".txt"), side);
    return max;
}

double render_heatmap(const SnapshotSeries& series, FieldSelector field, const fs::path& path)
{
    const Heatmap& map = series.heatmap(field);
    if (series.steps.empty() || map.rows == 0) {
        throw UndefinedObservable("render: empty series");
    }
    return write_heatmap(map, config_hash(series.config), std::string(field_name(field)), path);
}

nlohmann::json manifest_to_json(const RunManifest& m)
{
    nlohmann::json files = nlohmann::json::array();
    for (const auto& f : m.files) {
        files.push_back({{"path", f.path}, {"kind", f.kind}});
    }
    return {
        {"config_hash", m.config_hash},
        {"preset", m.preset},
        {"grid",
         {{"dz", m.config.grid.dz},
          {"dz_used", m.dz},
          {"dt", m.config.grid.dt},
          {"t_end", m.config.grid.t_end},
          {"nodes", m.nodes},
          {"steps", m.config.grid.steps()}}},
        {"config", config_to_json(m.config)},
        {"files", files},
        {"diagnostics", summary_to_json(m.summary)},
        {"volatile", {{"wall_start", m.wall_start}, {"wall_end", m.wall_end}}},
    };
}

RunManifest emit_run(const SnapshotSeries& series, const fs::path& dir,
                     const std::string& wall_start)
{
    ensure_dir(dir);
    ensure_dir(dir / "snapshots");
    RunManifest m;
    m.config = series.config;
    m.config_hash = config_hash(series.config);
    m.preset = series.config.preset;
    m.dz = series.dz;
    m.nodes = series.nodes;
    m.wall_start = wall_start;

    write_text_file(dir / "config.json", canonical_config_text(series.config));
    m.files.push_back({"config.json", "config"});

    for (const auto& d : series.dumps) {
        const std::string name = snapshot_name(d.t);
        std::ostringstream os;
        write_snapshot_csv(d, series.dz, m.config_hash, os);
        write_text_file(dir / name, os.str());
        m.files.push_back({name, "snapshot"});
    }
    {
        std::ostringstream os;
        write_timeseries_csv(series, m.config_hash, os);
        write_text_file(dir / "timeseries.csv", os.str());
        m.files.push_back({"timeseries.csv", "timeseries"});
    }
    for (int f = 0; f < 4; ++f) {
        const auto sel = static_cast<FieldSelector>(f);
        if (series.heatmap(sel).rows == 0) {
            continue;
        }
        const std::string name = "heatmap_" + std::string(field_name(sel)) + ".ppm";
        write_heatmap(series.heatmap(sel), m.config_hash, std::string(field_name(sel)),
                      dir / name);
        m.files.push_back({name, "heatmap"});
        m.files.push_back({name + ".txt", "sidecar"});
    }
    m.summary = summarize(series);
    write_text_file(dir / "summary.csv", "# config_hash=" + m.config_hash + "\n" +
                                             summary_csv_header() + "\n" +
                                             summary_csv_row(m.summary) + "\n");
    m.files.push_back({"summary.csv", "summary"});

    m.wall_end = wall_clock_now();
    write_text_file(dir / "manifest.json", manifest_to_json(m).dump(2) + "\n");
    return m;
}

RunManifest emit_inset_curves(const fs::path& dir, const std::string& wall_start,
                              std::size_t points)
{
    ensure_dir(dir);
    const auto curves = inset_curves();
    nlohmann::json spec = nlohmann::json::array();
    for (const auto& c : curves) {
        spec.push_back({{"name", c.name},
                        {"gamma", c.params.gamma},
                        {"delta_p", c.params.delta_p},
                        {"delta_c", c.params.delta_c},
                        {"omega_c", c.omega_c},
                        {"v", c.v},
                        {"points", points}});
    }
    RunManifest m;
    m.preset = std::string(kInsetPresetId);
    m.config_hash = fnv1a_hex(spec.dump());
    m.wall_start = wall_start;
    for (const auto& c : curves) {
        // ±15γ around the probe resonance covers both absorption branches
        const double span = 15.0 * c.params.gamma;
        const auto curve = susceptibility_curve(c.params, c.omega_c, c.v, -span, span, points);
        std::ostringstream os;
        os << "# config_hash=" << m.config_hash << "\n";
        write_curve_csv(curve, os);
        const std::string name = "chi_" + c.name + ".csv";
        write_text_file(dir / name, os.str());
        m.files.push_back({name, "curve"});
    }
    m.wall_end = wall_clock_now();
    nlohmann::json files = nlohmann::json::array();
    for (const auto& f : m.files) {
        files.push_back({{"path", f.path}, {"kind", f.kind}});
    }
    const nlohmann::json doc = {{"config_hash", m.config_hash},
                                {"preset", m.preset},
                                {"curves", spec},
                                {"files", files},
                                {"volatile", {{"wall_start", m.wall_start}, {"wall_end", m.wall_end}}}};
    write_text_file(dir / "manifest.json", doc.dump(2) + "\n");
    return m;
}

std::string wall_clock_now()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

}  // namespace rydsim
