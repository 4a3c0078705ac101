#include "rydsim/units.hpp"

#include <array>

#include "rydsim/errors.hpp"

namespace rydsim::units {

namespace {

struct UnitEntry {
    Dimension dim;
    std::string_view tag;
    double factor;
};

// "MHz" and "MHz_x2pi" are deliberately the same factor: every
// configuration frequency is read as linear MHz and converted to rad/µs.
constexpr std::array kUnits{
    UnitEntry{Dimension::frequency, "rad/us", 1.0},
    UnitEntry{Dimension::frequency, "kHz", kTwoPi * 1.0e-3},
    UnitEntry{Dimension::frequency, "MHz", kTwoPi},
    UnitEntry{Dimension::frequency, "MHz_x2pi", kTwoPi},
    UnitEntry{Dimension::frequency, "GHz", kTwoPi * 1.0e3},
    UnitEntry{Dimension::length, "um", 1.0},
    UnitEntry{Dimension::length, "nm", 1.0e-3},
    UnitEntry{Dimension::length, "mm", 1.0e3},
    UnitEntry{Dimension::time, "us", 1.0},
    UnitEntry{Dimension::time, "ns", 1.0e-3},
    UnitEntry{Dimension::time, "ms", 1.0e3},
    UnitEntry{Dimension::density, "um^-3", 1.0},
    UnitEntry{Dimension::density, "cm^-3", 1.0e-12},
    UnitEntry{Dimension::c6, "rad/us*um^6", 1.0},
    UnitEntry{Dimension::c6, "MHz*um^6", kTwoPi},
    UnitEntry{Dimension::c6, "GHz*um^6", kTwoPi * 1.0e3},
    UnitEntry{Dimension::c3, "rad/us*um^3", 1.0},
    UnitEntry{Dimension::c3, "MHz*um^3", kTwoPi},
    UnitEntry{Dimension::c3, "GHz*um^3", kTwoPi * 1.0e3},
    UnitEntry{Dimension::dimensionless, "1", 1.0},
};

}  // namespace

std::string_view canonical_unit(Dimension dim)
{
    for (const auto& e : kUnits) {
        if (e.dim == dim && e.factor == 1.0) {
            return e.tag;
        }
    }
    return "1";
}

double factor_to_canonical(std::string_view unit, Dimension dim)
{
    for (const auto& e : kUnits) {
        if (e.dim == dim && e.tag == unit) {
            return e.factor;
        }
    }
    throw DomainError("unknown unit '" + std::string(unit) + "' (expected one of: " +
                      known_units(dim) + ")");
}

std::string known_units(Dimension dim)
{
    std::string out;
    for (const auto& e : kUnits) {
        if (e.dim != dim) {
            continue;
        }
        if (!out.empty()) {
            out += ", ";
        }
        out += e.tag;
    }
    return out;
}

}  // namespace rydsim::units
