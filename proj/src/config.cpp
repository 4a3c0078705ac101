#include "rydsim/config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace rydsim {

using nlohmann::json;
using units::Dimension;

namespace {

struct NumericField {
    const char* path;
    Dimension dim;
    double& (*ref)(ScenarioConfig&);
};

// clang-format off
const NumericField kNumericFields[] = {
    {"physical.gamma", Dimension::frequency, [](ScenarioConfig& c) -> double& { return c.physical.gamma; }},
    {"physical.delta_p", Dimension::frequency, [](ScenarioConfig& c) -> double& { return c.physical.delta_p; }},
    {"physical.delta_c", Dimension::frequency, [](ScenarioConfig& c) -> double& { return c.physical.delta_c; }},
    {"physical.g_sqrt_n", Dimension::frequency, [](ScenarioConfig& c) -> double& { return c.physical.g_sqrt_n; }},
    {"physical.density_n", Dimension::density, [](ScenarioConfig& c) -> double& { return c.physical.density_n; }},
    {"physical.c6", Dimension::c6, [](ScenarioConfig& c) -> double& { return c.physical.c6; }},
    {"physical.c3", Dimension::c3, [](ScenarioConfig& c) -> double& { return c.physical.c3; }},
    {"geometry.length", Dimension::length, [](ScenarioConfig& c) -> double& { return c.geometry.length; }},
    {"geometry.separation", Dimension::length, [](ScenarioConfig& c) -> double& { return c.geometry.separation; }},
    {"geometry.diameter", Dimension::length, [](ScenarioConfig& c) -> double& { return c.geometry.diameter; }},
    {"control.omega_in", Dimension::frequency, [](ScenarioConfig& c) -> double& { return c.control.omega_in; }},
    {"control.t_c", Dimension::time, [](ScenarioConfig& c) -> double& { return c.control.t_c; }},
    {"control.tau_c", Dimension::time, [](ScenarioConfig& c) -> double& { return c.control.tau_c; }},
    {"control.hold_until", Dimension::time, [](ScenarioConfig& c) -> double& { return c.control.hold_until; }},
    {"control.omega_out", Dimension::frequency, [](ScenarioConfig& c) -> double& { return c.control.omega_out; }},
    {"control.tau_out", Dimension::time, [](ScenarioConfig& c) -> double& { return c.control.tau_out; }},
    {"pulse.omega_p", Dimension::frequency, [](ScenarioConfig& c) -> double& { return c.pulse.omega_p; }},
    {"pulse.t_p", Dimension::time, [](ScenarioConfig& c) -> double& { return c.pulse.t_p; }},
    {"pulse.tau_p", Dimension::time, [](ScenarioConfig& c) -> double& { return c.pulse.tau_p; }},
    {"grid.dz", Dimension::length, [](ScenarioConfig& c) -> double& { return c.grid.dz; }},
    {"grid.dt", Dimension::time, [](ScenarioConfig& c) -> double& { return c.grid.dt; }},
    {"grid.t_end", Dimension::time, [](ScenarioConfig& c) -> double& { return c.grid.t_end; }},
    {"interaction.kernel_tolerance", Dimension::dimensionless, [](ScenarioConfig& c) -> double& { return c.interaction.kernel_tolerance; }},
    {"interaction.onset", Dimension::time, [](ScenarioConfig& c) -> double& { return c.interaction.onset; }},
    {"output.dump_start", Dimension::time, [](ScenarioConfig& c) -> double& { return c.output.dump_start; }},
    {"output.dump_end", Dimension::time, [](ScenarioConfig& c) -> double& { return c.output.dump_end; }},
};

struct CountField {
    const char* path;
    std::size_t& (*ref)(ScenarioConfig&);
};

const CountField kCountFields[] = {
    {"solver.potential_stride", [](ScenarioConfig& c) -> std::size_t& { return c.solver.potential_stride; }},
    {"output.dump_stride", [](ScenarioConfig& c) -> std::size_t& { return c.output.dump_stride; }},
    {"output.heatmap_rows", [](ScenarioConfig& c) -> std::size_t& { return c.output.heatmap_rows; }},
    {"output.heatmap_cols", [](ScenarioConfig& c) -> std::size_t& { return c.output.heatmap_cols; }},
};
// clang-format on

const char* kStringFields[] = {"preset", "geometry.mode", "interaction.law", "solver.coupling"};

std::pair<std::string, std::string> split_path(std::string_view path)
{
    const auto dot = path.find('.');
    if (dot == std::string_view::npos) {
        return {std::string(path), {}};
    }
    return {std::string(path.substr(0, dot)), std::string(path.substr(dot + 1))};
}

const json* lookup(const json& doc, std::string_view path)
{
    const auto [section, key] = split_path(path);
    if (key.empty()) {
        auto it = doc.find(section);
        return it == doc.end() ? nullptr : &*it;
    }
    auto sec = doc.find(section);
    if (sec == doc.end() || !sec->is_object()) {
        return nullptr;
    }
    auto it = sec->find(key);
    return it == sec->end() ? nullptr : &*it;
}

// "5.75 MHz", "5.75MHz", "-2.3e5 GHz*um^6", "0". Empty unit means canonical.
std::pair<double, std::string> split_quantity(std::string_view text)
{
    std::string s(text);
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(s, &used);
    } catch (const std::exception&) {
        throw DomainError("expected a number, got '" + s + "'");
    }
    std::string unit = s.substr(used);
    const auto first = unit.find_first_not_of(" \t");
    unit = first == std::string::npos ? std::string() : unit.substr(first);
    while (!unit.empty() && (unit.back() == ' ' || unit.back() == '\t')) {
        unit.pop_back();
    }
    return {value, unit};
}

double quantity_from_json(const json& node, Dimension dim)
{
    if (node.is_object()) {
        if (!node.contains("value") || !node["value"].is_number()) {
            throw DomainError("quantity object needs a numeric \"value\"");
        }
        if (!node.contains("unit") || !node["unit"].is_string()) {
            throw DomainError("quantity object needs a \"unit\" tag");
        }
        return node["value"].get<double>() *
               units::factor_to_canonical(node["unit"].get<std::string>(), dim);
    }
    if (node.is_string()) {
        const auto [value, unit] = split_quantity(node.get<std::string>());
        if (unit.empty() && dim != Dimension::dimensionless) {
            throw DomainError("missing unit tag (expected one of: " + units::known_units(dim) +
                              ")");
        }
        return value * (unit.empty() ? 1.0 : units::factor_to_canonical(unit, dim));
    }
    if (node.is_number()) {
        if (dim != Dimension::dimensionless) {
            throw DomainError("missing unit tag (expected one of: " + units::known_units(dim) +
                              ")");
        }
        return node.get<double>();
    }
    throw DomainError("expected a quantity");
}

json quantity_to_json(double value, Dimension dim)
{
    if (dim == Dimension::dimensionless) {
        return value;
    }
    return json{{"value", value}, {"unit", std::string(units::canonical_unit(dim))}};
}

void set_at(json& doc, std::string_view path, json value)
{
    const auto [section, key] = split_path(path);
    if (key.empty()) {
        doc[section] = std::move(value);
    } else {
        doc[section][key] = std::move(value);
    }
}

std::string_view mode_name(Propagation mode)
{
    return mode == Propagation::co ? "co" : "counter";
}

std::string_view coupling_name(Coupling c)
{
    return c == Coupling::implicit ? "implicit" : "lagged";
}

void set_string_field(ScenarioConfig& config, std::string_view path, const std::string& value)
{
    if (path == "preset") {
        config.preset = value;
    } else if (path == "geometry.mode") {
        if (value == "co") {
            config.geometry.mode = Propagation::co;
        } else if (value == "counter") {
            config.geometry.mode = Propagation::counter;
        } else {
            throw DomainError("expected 'co' or 'counter', got '" + value + "'");
        }
    } else if (path == "interaction.law") {
        try {
            config.interaction.law = parse_interaction_law(value);
        } catch (const ConfigError& e) {
            throw DomainError(e.diagnostics().front().reason);
        }
    } else if (path == "solver.coupling") {
        if (value == "implicit") {
            config.solver.coupling = Coupling::implicit;
        } else if (value == "lagged") {
            config.solver.coupling = Coupling::lagged;
        } else {
            throw DomainError("expected 'implicit' or 'lagged', got '" + value + "'");
        }
    }
}

std::string string_field(const ScenarioConfig& config, std::string_view path)
{
    if (path == "preset") return config.preset;
    if (path == "geometry.mode") return std::string(mode_name(config.geometry.mode));
    if (path == "interaction.law") return std::string(to_string(config.interaction.law));
    return std::string(coupling_name(config.solver.coupling));
}

bool known_path(std::string_view path)
{
    for (const auto& f : kNumericFields) {
        if (path == f.path) return true;
    }
    for (const auto& f : kCountFields) {
        if (path == f.path) return true;
    }
    for (const char* p : kStringFields) {
        if (path == p) return true;
    }
    return path == "output.snapshot_times";
}

}  // namespace

std::vector<Diagnostic> validate(const ScenarioConfig& config)
{
    std::vector<Diagnostic> out;
    auto require = [&](bool ok, const char* path, const std::string& reason) {
        if (!ok) {
            out.push_back({path, reason});
        }
    };

    ScenarioConfig copy = config;
    for (const auto& f : kNumericFields) {
        require(std::isfinite(f.ref(copy)), f.path, "must be finite");
    }

    const auto& ph = config.physical;
    require(ph.gamma > 0.0, "physical.gamma", "must be > 0");
    require(ph.density_n > 0.0, "physical.density_n", "must be > 0");
    require(ph.g_sqrt_n > 0.0, "physical.g_sqrt_n", "must be > 0");
    const double omega_max = config.control.max_rabi();
    if (ph.g_sqrt_n > 0.0 && omega_max > 0.0) {
        const double ratio = ph.g_sqrt_n * ph.g_sqrt_n / (omega_max * omega_max);
        require(ratio >= kSlowLightRatio, "physical.g_sqrt_n",
                "slow-light regime violated: (g sqrt N)^2 / Omega_c,max^2 = " +
                    std::to_string(ratio) + " < 100");
    }

    const auto& geo = config.geometry;
    require(geo.length > 0.0, "geometry.length", "must be > 0");
    require(geo.diameter > 0.0, "geometry.diameter", "must be > 0");
    require(geo.separation >= 0.0, "geometry.separation", "must be >= 0");
    const double coefficient = law_power(config.interaction.law) == 6 ? ph.c6 : ph.c3;
    if (coefficient != 0.0) {
        if (is_point_law(config.interaction.law)) {
            require(geo.separation > 0.0, "geometry.separation",
                    "point interaction law needs a > 0");
        } else {
            require(geo.separation >= geo.diameter, "geometry.separation",
                    "overlapping cylinders: separation must be >= diameter");
        }
    }

    const auto& ctl = config.control;
    require(ctl.omega_in >= 0.0, "control.omega_in", "must be >= 0");
    require(ctl.omega_out >= 0.0, "control.omega_out", "must be >= 0");
    require(ctl.tau_c > 0.0, "control.tau_c", "must be > 0");
    require(ctl.tau_out > 0.0, "control.tau_out", "must be > 0");
    require(ctl.hold_until >= ctl.t_c, "control.hold_until", "must be >= control.t_c");

    require(config.pulse.omega_p > 0.0, "pulse.omega_p", "must be > 0");
    require(config.pulse.tau_p > 0.0, "pulse.tau_p", "must be > 0");

    require(config.grid.dz > 0.0, "grid.dz", "must be > 0");
    require(config.grid.dt > 0.0, "grid.dt", "must be > 0");
    require(config.grid.t_end > 0.0, "grid.t_end", "must be > 0");

    require(config.interaction.kernel_tolerance > 0.0, "interaction.kernel_tolerance",
            "must be > 0");
    require(config.solver.potential_stride >= 1, "solver.potential_stride", "must be >= 1");
    require(config.output.dump_stride >= 1, "output.dump_stride", "must be >= 1");
    require(config.output.heatmap_rows >= 1, "output.heatmap_rows", "must be >= 1");
    require(config.output.heatmap_cols >= 1, "output.heatmap_cols", "must be >= 1");
    return out;
}

ScenarioConfig config_from_json(const json& doc)
{
    if (!doc.is_object()) {
        throw ConfigError("", "configuration must be a JSON object");
    }
    ScenarioConfig config;
    std::vector<Diagnostic> diagnostics;

    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (it.value().is_object()) {
            for (auto jt = it.value().begin(); jt != it.value().end(); ++jt) {
                const std::string path = it.key() + "." + jt.key();
                if (!known_path(path)) {
                    diagnostics.push_back({path, "unknown field"});
                }
            }
        } else if (!known_path(it.key())) {
            diagnostics.push_back({it.key(), "unknown field"});
        }
    }

    for (const auto& f : kNumericFields) {
        if (const json* node = lookup(doc, f.path)) {
            try {
                f.ref(config) = quantity_from_json(*node, f.dim);
            } catch (const Error& e) {
                diagnostics.push_back({f.path, e.what()});
            }
        }
    }
    for (const auto& f : kCountFields) {
        if (const json* node = lookup(doc, f.path)) {
            if (node->is_number_unsigned()) {
                f.ref(config) = node->get<std::size_t>();
            } else {
                diagnostics.push_back({f.path, "expected a non-negative integer"});
            }
        }
    }
    for (const char* path : kStringFields) {
        if (const json* node = lookup(doc, path)) {
            if (!node->is_string()) {
                diagnostics.push_back({path, "expected a string"});
                continue;
            }
            try {
                set_string_field(config, path, node->get<std::string>());
            } catch (const Error& e) {
                diagnostics.push_back({path, e.what()});
            }
        }
    }
    if (const json* node = lookup(doc, "output.snapshot_times")) {
        if (!node->is_array()) {
            diagnostics.push_back({"output.snapshot_times", "expected an array of times"});
        } else {
            for (std::size_t i = 0; i < node->size(); ++i) {
                try {
                    config.output.snapshot_times.push_back(
                        quantity_from_json((*node)[i], Dimension::time));
                } catch (const Error& e) {
                    diagnostics.push_back(
                        {"output.snapshot_times[" + std::to_string(i) + "]", e.what()});
                }
            }
        }
    }
    if (!diagnostics.empty()) {
        throw ConfigError(std::move(diagnostics));
    }
    return config;
}

json config_to_json(const ScenarioConfig& config)
{
    json doc = json::object();
    ScenarioConfig copy = config;
    for (const auto& f : kNumericFields) {
        set_at(doc, f.path, quantity_to_json(f.ref(copy), f.dim));
    }
    for (const auto& f : kCountFields) {
        set_at(doc, f.path, f.ref(copy));
    }
    for (const char* path : kStringFields) {
        set_at(doc, path, string_field(config, path));
    }
    json times = json::array();
    for (double t : config.output.snapshot_times) {
        times.push_back(quantity_to_json(t, Dimension::time));
    }
    set_at(doc, "output.snapshot_times", std::move(times));
    return doc;
}

std::string canonical_config_text(const ScenarioConfig& config)
{
    return config_to_json(config).dump(2) + "\n";
}

std::string config_hash(const ScenarioConfig& config)
{
    return fnv1a_hex(canonical_config_text(config));
}

std::string fnv1a_hex(std::string_view bytes)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ScenarioConfig load_config_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open configuration file " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("JSON parse error: ") + e.what());
    }
    return config_from_json(doc);
}

void apply_override(ScenarioConfig& config, std::string_view key, std::string_view value)
{
    const std::string path(key);
    try {
        for (const auto& f : kNumericFields) {
            if (path != f.path) {
                continue;
            }
            const auto [number, unit] = split_quantity(value);
            const double canonical =
                number * (unit.empty() ? 1.0 : units::factor_to_canonical(unit, f.dim));
            if (path == "physical.density_n" && config.physical.density_n > 0.0 &&
                canonical > 0.0) {
                config.physical.g_sqrt_n *= std::sqrt(canonical / config.physical.density_n);
            }
            f.ref(config) = canonical;
            return;
        }
        for (const auto& f : kCountFields) {
            if (path != f.path) {
                continue;
            }
            const auto [number, unit] = split_quantity(value);
            if (!unit.empty() || number < 0.0 || number != std::floor(number)) {
                throw DomainError("expected a non-negative integer");
            }
            f.ref(config) = static_cast<std::size_t>(number);
            return;
        }
        for (const char* p : kStringFields) {
            if (path == p) {
                set_string_field(config, path, std::string(value));
                return;
            }
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(path, e.what());
    }
    throw ConfigError(path, "unknown field");
}

void apply_assignment(ScenarioConfig& config, std::string_view assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError(std::string(assignment), "expected key=value");
    }
    apply_override(config, assignment.substr(0, eq), assignment.substr(eq + 1));
}

std::vector<std::string> override_keys()
{
    std::vector<std::string> keys;
    for (const auto& f : kNumericFields) keys.emplace_back(f.path);
    for (const auto& f : kCountFields) keys.emplace_back(f.path);
    for (const char* p : kStringFields) keys.emplace_back(p);
    return keys;
}

json diagnostics_to_json(const std::vector<Diagnostic>& diagnostics)
{
    json out = json::array();
    for (const auto& d : diagnostics) {
        out.push_back({{"path", d.path}, {"reason", d.reason}});
    }
    return out;
}

}  // namespace rydsim
