#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

#include "rydsim/core_model.hpp"

namespace rydsim {

/// Normalized steady-state susceptibility at probe offset δ under a constant
/// level shift V:
///
///     χ(δ) = iγ / (γ + i(Δp − δ) − iΩ_c² / (V + Δp + Δc − δ))
///
/// scaled so that the bare two-level peak has Im χ = 1. At the pole of the
/// Rydberg branch the limit (0) is returned. Throws DomainError unless γ > 0.
std::complex<double> susceptibility(double delta, double v, const PhysicalParams& params,
                                    double omega_c);

/// Roots of (Δp − δ)(V + Δp + Δc − δ) = Ω_c², ascending (duplicate root once).
std::vector<double> peak_positions(double v, const PhysicalParams& params, double omega_c);

struct EitWindow {
    double half_width = 0.0;      ///< smallest δ > 0 with Im χ = 1/2 (rad/µs)
    double group_velocity = 0.0;  ///< c Ω_c² / (g²N) (µm/µs)
};

/// Throws DomainError unless Ω_c > 0.
EitWindow eit_window_and_vg(const PhysicalParams& params, double omega_c);

struct SusceptibilityCurve {
    PhysicalParams params;
    double omega_c = 0.0;
    double v = 0.0;
    std::vector<double> delta;
    std::vector<std::complex<double>> chi;
};

/// `points` samples evenly spaced on [lo, hi].
SusceptibilityCurve susceptibility_curve(const PhysicalParams& params, double omega_c, double v,
                                         double lo, double hi, std::size_t points);

/// Columns delta, re_chi, im_chi with a commented parameter header.
void write_curve_csv(const SusceptibilityCurve& curve, std::ostream& out);

}  // namespace rydsim
