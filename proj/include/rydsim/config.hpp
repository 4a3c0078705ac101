#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rydsim/errors.hpp"
#include "rydsim/scenario.hpp"

namespace rydsim {

/// Every violated constraint, as (dotted field path, reason). Empty when valid.
std::vector<Diagnostic> validate(const ScenarioConfig& config);

/// Parses a configuration document. Dimensional values must carry a unit
/// tag, either {"value": 5.75, "unit": "MHz"} or the string "5.75 MHz".
/// Missing sections fall back to defaults. Throws ConfigError.
ScenarioConfig config_from_json(const nlohmann::json& doc);

/// Canonical form: internal units, sorted keys. Parsing it back yields a
/// bit-identical configuration.
nlohmann::json config_to_json(const ScenarioConfig& config);
std::string canonical_config_text(const ScenarioConfig& config);

/// 16 hex digits (FNV-1a 64) of the canonical text.
std::string config_hash(const ScenarioConfig& config);
std::string fnv1a_hex(std::string_view bytes);

ScenarioConfig load_config_file(const std::filesystem::path& path);

/// `key` is a dotted path such as "physical.c6"; `value` is a number with an
/// optional unit ("-2.3e5 GHz*um^6", "10 us"); a bare number is read in
/// internal units. Changing physical.density_n rescales g_sqrt_n so that the
/// single-atom coupling g stays fixed. Throws ConfigError.
void apply_override(ScenarioConfig& config, std::string_view key, std::string_view value);

/// Splits "key=value" and applies it.
void apply_assignment(ScenarioConfig& config, std::string_view assignment);

/// Dotted paths accepted by apply_override.
std::vector<std::string> override_keys();

/// Machine-readable diagnostics: [{"path": ..., "reason": ...}, ...].
nlohmann::json diagnostics_to_json(const std::vector<Diagnostic>& diagnostics);

}  // namespace rydsim
