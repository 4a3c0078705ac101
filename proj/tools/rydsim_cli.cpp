#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rydsim/config.hpp"
#include "rydsim/errors.hpp"
#include "rydsim/output.hpp"
#include "rydsim/presets.hpp"
#include "rydsim/propagation.hpp"
#include "rydsim/sweep.hpp"

namespace fs = std::filesystem;
using namespace rydsim;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitBlowUp = 3;
constexpr int kExitIo = 4;

constexpr const char* kOutEnv = "RYDSIM_OUT";

struct Source {
    std::string preset;
    std::string config_file;
    std::vector<std::string> assignments;
    std::string c6;
    bool paper_grid = false;
    std::string out;
};

void add_source_options(CLI::App* cmd, Source& src)
{
    cmd->add_option("--preset", src.preset, "Preset id (see --list-presets)");
    cmd->add_option("--config", src.config_file, "JSON configuration file");
    cmd->add_option("--set", src.assignments, "Override, key=value (repeatable)")
        ->type_name("KEY=VALUE");
    cmd->add_option("--c6", src.c6, "Shortcut for --set physical.c6=VALUE");
    cmd->add_flag("--paper-grid", src.paper_grid, "Use the fine grid dz=0.02 um, dt=0.002 us");
    cmd->add_option("--out", src.out,
                    std::string("Output directory (default: $") + kOutEnv + "/<preset>-<hash>)");
}

bool is_inset_preset(const Source& src) { return src.preset == kInsetPresetId; }

ScenarioConfig load(const Source& src)
{
    if (!src.preset.empty() && !src.config_file.empty()) {
        throw ConfigError("preset", "give either --preset or --config, not both");
    }
    ScenarioConfig cfg;
    if (!src.config_file.empty()) {
        cfg = load_config_file(src.config_file);
    } else if (!src.preset.empty()) {
        cfg = make_preset(src.preset).config;
    } else {
        throw ConfigError("preset", "one of --preset or --config is required");
    }
    for (const auto& a : src.assignments) {
        apply_assignment(cfg, a);
    }
    if (!src.c6.empty()) {
        apply_override(cfg, "physical.c6", src.c6);
    }
    if (src.paper_grid) {
        apply_paper_grid(cfg);
    }
    return cfg;
}

fs::path output_dir(const Source& src, const std::string& label, const std::string& hash)
{
    if (!src.out.empty()) {
        return src.out;
    }
    const char* root = std::getenv(kOutEnv);
    const fs::path base = root && *root ? fs::path(root) : fs::path("rydsim-out");
    return base / (hash.empty() ? label : label + "-" + hash.substr(0, 8));
}

void print_config_error(const ConfigError& e)
{
    nlohmann::json doc = {{"valid", false}, {"diagnostics", diagnostics_to_json(e.diagnostics())}};
    std::cerr << doc.dump(2) << "\n";
}

int cmd_run(const Source& src)
{
    const std::string start = wall_clock_now();
    if (is_inset_preset(src)) {
        const fs::path dir = output_dir(src, src.preset, "");
        emit_inset_curves(dir, start);
        std::cout << dir.string() << "\n";
        return 0;
    }
    const ScenarioConfig cfg = load(src);
    const fs::path dir = output_dir(src, cfg.preset.empty() ? "custom" : cfg.preset,
                                    config_hash(cfg));
    const SnapshotSeries series = run_scenario(cfg);
    const RunManifest m = emit_run(series, dir, start);
    std::cout << dir.string() << "\n" << summary_to_json(m.summary).dump(2) << "\n";
    return 0;
}

int cmd_sweep(const Source& src, const std::string& axis, std::vector<std::string> values,
              std::size_t jobs)
{
    const ScenarioConfig cfg = load(src);
    // fail fast on an unknown axis instead of once per row
    if (!values.empty()) {
        ScenarioConfig probe = cfg;
        apply_override(probe, axis, values.front());
    } else {
        const auto keys = override_keys();
        if (std::find(keys.begin(), keys.end(), axis) == keys.end()) {
            throw ConfigError(axis, "unknown field");
        }
    }
    const SweepResult result = run_sweep(cfg, axis, values, jobs);
    const fs::path dir = output_dir(src, (cfg.preset.empty() ? "custom" : cfg.preset) + "-sweep",
                                    config_hash(cfg));
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    }
    write_text_file(dir / "sweep.csv", "# config_hash=" + config_hash(cfg) + "\n" +
                                           sweep_csv(result));
    std::cout << (dir / "sweep.csv").string() << "\n";
    return 0;
}

int cmd_render(const Source& src, const std::string& field, std::size_t rows, std::size_t cols)
{
    ScenarioConfig cfg = load(src);
    cfg.output = OutputSpec{};
    cfg.output.heatmap_rows = rows;
    cfg.output.heatmap_cols = cols;
    const fs::path dir = output_dir(src, (cfg.preset.empty() ? "custom" : cfg.preset) + "-render",
                                    config_hash(cfg));
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    }
    const SnapshotSeries series = run_scenario(cfg);
    std::vector<FieldSelector> fields;
    if (field == "all") {
        fields = {FieldSelector::e1, FieldSelector::s1, FieldSelector::e2, FieldSelector::s2};
    } else {
        fields = {parse_field(field)};
    }
    for (FieldSelector f : fields) {
        const fs::path path = dir / ("heatmap_" + std::string(field_name(f)) + ".ppm");
        render_heatmap(series, f, path);
        std::cout << path.string() << "\n";
    }
    return 0;
}

int cmd_validate(const Source& src)
{
    if (is_inset_preset(src)) {
        std::cout << nlohmann::json{{"valid", true}, {"diagnostics", nlohmann::json::array()}}.dump(2)
                  << "\n";
        return 0;
    }
    const ScenarioConfig cfg = load(src);
    auto diagnostics = validate(cfg);
    if (diagnostics.empty()) {
        try {
            check_runnable(cfg);
        } catch (const GridError& e) {
            diagnostics.push_back({"grid", e.what()});
        }
    }
    const nlohmann::json doc = {{"valid", diagnostics.empty()},
                                {"config_hash", config_hash(cfg)},
                                {"diagnostics", diagnostics_to_json(diagnostics)}};
    std::cout << doc.dump(2) << "\n";
    return diagnostics.empty() ? 0 : kExitConfig;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Two-ensemble Rydberg-EIT storage and retrieval simulator"};
    app.footer(std::string("Environment:\n  ") + kOutEnv +
               "  default output root (otherwise ./rydsim-out)\n"
               "Exit status: 0 ok, 2 invalid configuration, 3 numerical blow-up, 4 I/O failure.\n"
               "See docs/rydsim.1 for the full reference.");
    app.require_subcommand(0, 1);
    bool list = false;
    app.add_flag("--list-presets", list, "Print the preset ids and exit");

    Source src;
    auto* run = app.add_subcommand("run", "Run a scenario and write snapshots, heatmaps, manifest");
    add_source_options(run, src);

    std::string axis;
    std::vector<std::string> values;
    std::size_t jobs = 0;
    auto* sweep = app.add_subcommand("sweep", "Run one scenario per value of a parameter");
    add_source_options(sweep, src);
    sweep->add_option("--axis", axis, "Dotted parameter path, e.g. geometry.separation")->required();
    sweep->add_option("--values", values, "Values, comma separated, units allowed")
        ->delimiter(',');
    sweep->add_option("--jobs", jobs, "Concurrent runs (default: hardware threads)");

    std::string field = "all";
    std::size_t rows = 400;
    std::size_t cols = 1500;
    auto* render = app.add_subcommand("render", "Run a scenario and write space-time heatmaps only");
    add_source_options(render, src);
    render->add_option("--field", field, "e1, s1, e2, s2 or all");
    render->add_option("--rows", rows, "Maximum time samples");
    render->add_option("--cols", cols, "Maximum space samples");

    auto* val = app.add_subcommand("validate", "Check a configuration and print diagnostics as JSON");
    add_source_options(val, src);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (list) {
            for (const auto& id : preset_ids()) {
                std::cout << id << "  " << make_preset(id).description << "\n";
            }
            std::cout << kInsetPresetId << "  susceptibility curves for the detuning insets\n";
            return 0;
        }
        if (run->parsed()) return cmd_run(src);
        if (sweep->parsed()) return cmd_sweep(src, axis, values, jobs);
        if (render->parsed()) return cmd_render(src, field, rows, cols);
        if (val->parsed()) return cmd_validate(src);
        std::cout << app.help();
        return 0;
    } catch (const ConfigError& e) {
        print_config_error(e);
        return kExitConfig;
    } catch (const GeometryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const GridError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const BlowUpError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBlowUp;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
