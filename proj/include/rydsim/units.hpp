#pragma once

#include <numbers>
#include <string>
#include <string_view>

// Internal unit system: lengths in µm, times in µs, every frequency-like
// quantity (rates, detunings, Rabi frequencies, interaction strengths) in
// angular rad/µs. Linear MHz inputs are multiplied by 2π on ingest.

namespace rydsim::units {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Vacuum speed of light in µm/µs.
inline constexpr double kLightSpeed = 2.99792458e8;

/// Linear MHz to rad/µs.
constexpr double mhz(double x) { return kTwoPi * x; }
constexpr double ghz(double x) { return kTwoPi * 1.0e3 * x; }

/// cm⁻³ to µm⁻³.
constexpr double per_cm3(double x) { return x * 1.0e-12; }

enum class Dimension {
    frequency,   // rad/µs
    length,      // µm
    time,        // µs
    density,     // µm⁻³
    c6,          // rad/µs · µm⁶
    c3,          // rad/µs · µm³
    dimensionless,
};

/// Canonical unit tag written back on serialization.
std::string_view canonical_unit(Dimension dim);

/// Multiplicative factor taking a value tagged `unit` to canonical units.
/// Throws DomainError when the tag is unknown or has the wrong dimension.
double factor_to_canonical(std::string_view unit, Dimension dim);

/// Known tags for a dimension, for diagnostics.
std::string known_units(Dimension dim);

}  // namespace rydsim::units
