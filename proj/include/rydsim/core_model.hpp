#pragma once

#include <cstddef>

#include "rydsim/units.hpp"

namespace rydsim {

/// Atomic and medium constants. All rates in rad/µs, density in µm⁻³.
struct PhysicalParams {
    double gamma = 0.0;      ///< decay rate of |e>
    double delta_p = 0.0;    ///< probe detuning ω_eg − ω_p
    double delta_c = 0.0;    ///< control detuning ω_re − ω_c
    double g_sqrt_n = 0.0;   ///< collective coupling g√N
    double density_n = 0.0;  ///< atomic density N
    double c6 = 0.0;         ///< van der Waals coefficient, rad/µs·µm⁶ (signed)
    double c3 = 0.0;         ///< dipole–dipole coefficient, rad/µs·µm³ (signed)

    static constexpr double light_speed = units::kLightSpeed;

    /// Single-atom coupling g, derived from g√N and N.
    double coupling_g() const;
    double two_photon_detuning() const { return delta_p + delta_c; }

    bool operator==(const PhysicalParams&) const = default;
};

enum class Propagation { co, counter };

struct Geometry {
    double length = 0.0;      ///< ensemble length L (µm)
    double separation = 0.0;  ///< axis-to-axis distance a (µm)
    double diameter = 0.0;    ///< ensemble diameter d (µm)
    Propagation mode = Propagation::counter;

    bool operator==(const Geometry&) const = default;
};

/// Control program: tanh switch-off ending at t_c, dark hold until
/// hold_until, then the time-reversed tanh switch-on for retrieval.
struct ControlSchedule {
    double omega_in = 0.0;    ///< storage amplitude Ω_c^{in,M}
    double t_c = 0.0;         ///< switch-off center time
    double tau_c = 1.0;       ///< switch-off time scale
    double hold_until = 0.0;  ///< retrieval start t_r
    double omega_out = 0.0;   ///< retrieval amplitude Ω_c^{out,M}
    double tau_out = 1.0;     ///< switch-on time scale

    double max_rabi() const { return omega_in > omega_out ? omega_in : omega_out; }

    bool operator==(const ControlSchedule&) const = default;
};

struct PulseSpec {
    double omega_p = 0.0;  ///< peak probe Rabi frequency Ω_p^M
    double t_p = 0.0;      ///< peak arrival time at the entry face
    double tau_p = 1.0;    ///< Gaussian duration

    /// First zero of J0.
    static constexpr double nu_01 = 2.404825557695773;

    bool operator==(const PulseSpec&) const = default;
};

struct GridSpec {
    double dz = 0.2;
    double dt = 0.02;
    double t_end = 0.0;

    /// Number of cells ceil(L/dz); the grid carries cells + 1 nodes.
    std::size_t cells(double length) const;
    /// Node spacing actually used, L / cells.
    double spacing(double length) const;
    std::size_t steps() const;

    bool operator==(const GridSpec&) const = default;
};

/// Smallest g√N/Ω_c ratio squared accepted as "slow light".
inline constexpr double kSlowLightRatio = 100.0;

/// Fallback collective coupling, 2π × 10 GHz.
inline constexpr double kDefaultCoupling = units::ghz(10.0);

/// Ω_c(t) in rad/µs. Total and continuous; zero on [t_c, hold_until].
double control_field(double t, const ControlSchedule& sched);

struct RabiRate {
    double value = 0.0;
    bool one_sided = false;  ///< true at a clamp kink (t_c or hold_until)
};

/// dΩ_c/dt, analytic. At the kinks returns the left derivative and flags it.
RabiRate control_field_rate(double t, const ControlSchedule& sched);

/// Ω_p(ρ, t) at the entry face. Throws DomainError for ρ outside [0, d/2].
double input_pulse(double t, double rho, const PulseSpec& spec, const Geometry& geom);

/// Collective coupling needed for the compressed pulse v_g τ_p to fit in L/2.
double required_coupling(const Geometry& geom, const ControlSchedule& sched,
                         const PulseSpec& spec);

/// max(kDefaultCoupling, required_coupling); kDefaultCoupling when Ω_c ≡ 0.
double default_coupling(const PhysicalParams& params, const Geometry& geom,
                        const ControlSchedule& sched, const PulseSpec& spec);

/// g√N that brings the pulse peak (entering at t_p) to rest at depth
/// `stop_depth` under the switch-off part of the schedule.
double stopping_coupling(const ControlSchedule& sched, const PulseSpec& spec,
                         double stop_depth);

/// Slow-light group velocity c Ω_c² / (g²N).
double group_velocity(double omega_c, double g_sqrt_n);

}  // namespace rydsim
