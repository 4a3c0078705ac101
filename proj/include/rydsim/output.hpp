#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "rydsim/diagnostics.hpp"
#include "rydsim/linear_response.hpp"
#include "rydsim/propagation.hpp"

namespace rydsim {

std::string_view field_name(FieldSelector f);
/// Accepts e1, s1, e2, s2. Throws ConfigError.
FieldSelector parse_field(std::string_view name);

struct EmittedFile {
    std::string path;  ///< relative to the run directory
    std::string kind;  ///< config, snapshot, timeseries, heatmap, sidecar, summary, curve
};

struct RunManifest {
    std::string config_hash;
    std::string preset;
    ScenarioConfig config;
    double dz = 0.0;
    std::size_t nodes = 0;
    std::vector<EmittedFile> files;
    Summary summary;
    std::string wall_start;  ///< volatile: excluded from every hash
    std::string wall_end;
};

nlohmann::json manifest_to_json(const RunManifest& manifest);

/// Columns z, |E1|, argE1, |S1|, argS1, V1 and the same for ensemble 2.
void write_snapshot_csv(const FieldState& state, double dz, const std::string& hash,
                        std::ostream& out);

/// Per-step scalar record: entry/exit fields, peaks and norms.
void write_timeseries_csv(const SnapshotSeries& series, const std::string& hash,
                          std::ostream& out);

/// Binary PPM (P6, equal channels): one pixel per (t, z) sample, t down the
/// rows, 8-bit linear in magnitude with the maximum mapped to 255. The maximum and the
/// config hash are written both as header comments and in `<path>.txt`.
/// Returns the maximum. Throws IoError.
double write_heatmap(const Heatmap& map, const std::string& hash, const std::string& label,
                     const std::filesystem::path& path);

/// Renders one field of a finished run. Throws UndefinedObservable for an
/// empty series and IoError on write failure.
double render_heatmap(const SnapshotSeries& series, FieldSelector field,
                      const std::filesystem::path& path);

/// Writes the full output set of a run into `dir` (created if needed) and
/// returns its manifest, which is also stored as manifest.json.
RunManifest emit_run(const SnapshotSeries& series, const std::filesystem::path& dir,
                     const std::string& wall_start);

/// Writes the four susceptibility inset curves plus a manifest.
RunManifest emit_inset_curves(const std::filesystem::path& dir, const std::string& wall_start,
                              std::size_t points = 2001);

/// Current UTC time, ISO 8601.
std::string wall_clock_now();

/// Writes `text` to `path`, throwing IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace rydsim
