#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rydsim/scenario.hpp"

namespace rydsim {

/// One row of the preset audit: the value a field must hold, written with
/// its source unit, and where it comes from.
struct AuditEntry {
    std::string path;    ///< dotted config path
    std::string value;   ///< e.g. "10 us", "-2.3e5 GHz*um^6"
    std::string origin;  ///< figure caption it is read from, or "chosen"/"derived"
};

struct Preset {
    std::string id;
    std::string description;
    ScenarioConfig config;
    std::vector<AuditEntry> audit;
};

/// Scenario presets in a fixed order.
const std::vector<std::string>& preset_ids();

/// Throws ConfigError for an unknown id.
Preset make_preset(std::string_view id);

/// Id of the susceptibility-curve preset (not a scenario).
inline constexpr std::string_view kInsetPresetId = "fig2-insets";

/// Desk grid (dz, dt) shipped with presets and the fine grid of the figures.
inline constexpr double kDeskDz = 0.2;
inline constexpr double kDeskDt = 0.02;
inline constexpr double kPaperDz = 0.02;
inline constexpr double kPaperDt = 0.002;

void apply_paper_grid(ScenarioConfig& config);

struct InsetCurve {
    std::string name;
    PhysicalParams params;
    double omega_c = 0.0;
    double v = 0.0;
};

/// The four inset curves: Δp = ±5γ, each with V = 0 and with the V that
/// places the Rydberg-branch absorption peak at δ = 0 for Δp = −5γ.
std::vector<InsetCurve> inset_curves();

}  // namespace rydsim
